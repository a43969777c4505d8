#include "tiltlab/formula.hpp"

namespace tiltlab {

// Printed in canonical form, so they double as golden round-trip inputs.
std::vector<std::string> witt_pair_corpus() {
    return {
        "E x:W (x + x = 0)",
        "A x:W (x + 0 = x)",
        "A x:W (x * 1 = x)",
        "A x:W (E y:W (x + y = 0))",
        "E x:W (x * x = 1 + 1)",
        "A x:W (A y:W (x * y = y * x))",
        "A x:W (A y:W (x + y = y + x))",
        "E x:W (~(x = 0) & x * x = 0)",
        "A x:W (x * x = 0 -> x = 0)",
        "A x:R (E y:R (x + y = 0))",
        "E x:R (x * x + x + 1 = 0)",
        "A x:R ([x] * [x] = [x * x])",
        "A x:R (A y:R ([x * y] = [x] * [y]))",
        "A x:R (A y:R ([x + y] = [x] + [y]))",
        "E x:W (A y:R (~(x = [y])))",
        "A x:W (E y:R (x = [y]))",
        "[1] = 1",
        "[0] = 0",
        "1 + 1 = 0",
        "E x:W (x + x + x = 0 & ~(x = 0))",
        "A x:W (x + x + x + x = 0)",
        "E x:W (E y:W (x * y = 1 + 1))",
        "A x:W (A y:W (x * y = 0 -> x = 0 | y = 0))",
        "E x:W (E y:W (~(x = 0) & ~(y = 0) & x * y = 0))",
        "A x:W (x = 0 | E y:W (x * y = 1))",
        "E x:R (E y:R (~(x = y) & [x] = [y]))",
        "A x:R (E y:W (y * y = [x]))",
        "A x:W (E y:W (y + y = x))",
        "E x:W ([1] + x = 0)",
        "A x:W (x * (x + 1) = x * x + x)",
        "A x:R (x * x = x -> x = 0 | x = 1)",
        "E x:R (~(x * x * x = x))",
        "A x:R (x * x * x * x * x * x * x * x * x = x)",
        "E x:W (x * x = [1] + [1] + [1])",
        "A x:W (~(x * x = 1 + 1 + 1))",
        "E x:W (A y:W (x * y = 0))",
        "A x:W (E y:W (x = y * y + y))",
        "E x:W (E y:R (x = [y] & ~(y * y = y)))",
        "A x:R (A y:R (x * y = 0 -> x = 0 | y = 0))",
        "~(E x:W (x + 1 = x))",
        "E x:W (x = 1) & E y:R (y = 0)",
        "A x:W (x = x) -> E y:R (y = y)",
        "E x:W (x * x * x = x & ~(x * x = x))",
        "A x:W (A y:W (x * x = y * y -> x = y | x + y = 0))",
        "E x:R (A y:R (x * y = y))",
        "A x:W (E y:R (x + [y] * [y] = [y]))",
        "E x:W (E y:W (x + y = 1 & x * y = 0 & ~(x = 0) & ~(y = 0)))",
        "A x:W (x * 0 = 0)",
        "E x:R ([x] + [x] = 1)",
        "A x:W (A y:W (x + y = 0 -> y + x = 0))",
    };
}

std::vector<std::string> local_ring_corpus() {
    return {
        "E x (x = x)",
        "E x (x + x = 0)",
        "E x (x * x = 1)",
        "E x (x in m)",
        "E x (x in m & x * x = 0)",
        "E x (E y (x * y = 1 & x in m))",
        "0 in m",
        "1 in m",
        "1 + 1 = 0",
        "E x (x + 1 = 0)",
        "E x (x * x = 1 + 1)",
        "E x (x * x * x = 1 + 1 + 1)",
        "E x (x * x + x + 1 = 0)",
        "E x (x * x + 1 = 0)",
        "E x (E y (x * y = 1 + 1 & x in m & y in m))",
        "E x (x in m & x + 1 = 0)",
        "E x (x * (x + 1) = 0)",
        "E x (x * x = x & x in m)",
        "E x (E y (x + y = 1 & x in m & y in m))",
        "E x (x * x = 0 | x * x = 1)",
        "true",
        "E x (x = 0) & E y (y = 1)",
        "E x (x * x * x * x = 1 + 1)",
        "E x (E y (x * x = y & y in m))",
        "E x (E y (x * x + y * y = 0))",
        "E x (E y (x * x + y * y + 1 = 0))",
        "E x (x + x = 1)",
        "E x (x + x + x = 1)",
        "E x (x in m & x * x = 1 + 1)",
        "E x (x in m & x * x * x = 1 + 1 + 1)",
        "E x (x * x = 1 + 1) | E y (y * y * y = 1 + 1 + 1)",
        "E x (E y (x * y = 0 & x in m & y in m))",
        "E x (x * x * x = 0)",
        "E x (x * x * x = x & x + 1 = 0)",
        "E x (E y (x * y = 1 + 1))",
        "E x (E y (x = y * y * y & y in m))",
        "E x (x * x = 1 & x + 1 = 0)",
        "E x (E y (x + y = 0 & x * y = 1))",
        "E x (x + 1 + 1 = 0)",
        "E x (x * x * x * x * x = x & x in m)",
        "E x (E y (x * x = y + 1 & y in m))",
        "E x (E y (E z (x * y = z & z in m)))",
        "E x (1 + x * x * x = 0)",
        "E x (x in m | x + 1 = 0)",
        "E x (x * x + x = 1 + 1)",
        "E x (E y (x + y = x * y))",
        "E x (x * x * x + x = 1)",
        "E x (x * x = 1 + 1 + 1)",
        "E x (E y (x * x * y = 1 + 1 & y in m))",
        "1 + 1 + 1 = 0 | 1 + 1 = 0",
    };
}

}  // namespace tiltlab
