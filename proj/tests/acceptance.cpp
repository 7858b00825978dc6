int main() { return 1; } // not yet implemented
