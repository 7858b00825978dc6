#include "ciporter/driver.hpp"

int main(int argc, char** argv) {
    return ciporter::run(argc, argv);
}
