#include <string>
#include <vector>

#include <iostream>

#include "chronorg/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chronorg::app::dispatch(args, std::cout, std::cerr);
}
