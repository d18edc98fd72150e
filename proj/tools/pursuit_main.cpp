#include <iostream>

#include "pursuit/runner.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const pursuit::RunManifest manifest = pursuit::parse_cli(args);
        return pursuit::run_trials(manifest);
    } catch (const pursuit::UsageError& e) {
        (e.exit_code == 0 ? std::cout : std::cerr) << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
