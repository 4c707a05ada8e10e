#include <catch2/catch_amalgamated.hpp>
#define MULTIFORM_CLI_PATH_UNUSED
