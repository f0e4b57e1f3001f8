#include <osc_transport/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    return osc_transport::cli::run_cli(argc, argv, std::cout, std::cerr);
}
