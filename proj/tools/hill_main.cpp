// CLI front end; subcommands are wired up in hill/cli.hpp so the command
// layer can be driven in-process by the test suite.

#include "hill/cli.hpp"

int main(int argc, char** argv) {
    return hill::cli::run(argc, argv);
}
