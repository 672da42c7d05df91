#include "daleel/cli.hpp"

int main(int argc, char** argv) {
    return daleel::cli::run({argv + 1, argv + argc});
}
