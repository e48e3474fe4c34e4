#ifndef HILL_CLI_HPP
#define HILL_CLI_HPP
namespace hill::cli { inline int run(int, char**) { return 0; } }
#endif
