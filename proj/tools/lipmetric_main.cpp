#include "lipmetric.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lipmetric::run(args, std::cout, std::cerr);
}
