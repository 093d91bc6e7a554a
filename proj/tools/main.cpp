#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "goldbach/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        goldbach::Config cfg = goldbach::parse_args(args, std::cerr);
        if (cfg.help) {
            std::cout << goldbach::usage_text();
            return 0;
        }
        return goldbach::run(cfg, std::cout, std::cerr);
    } catch (const goldbach::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << goldbach::usage_text();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
