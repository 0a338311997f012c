#include <string>
#include <vector>

#include <knotcs/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return knotcs::cli::run(args);
}
