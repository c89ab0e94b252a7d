#include <catch2/catch_amalgamated.hpp>
#include "testutil.hpp"
