// Mutation smoke test: builds the whole library with a deliberately flipped
// sign in the incoming Jost coefficient and demands that the verification
// suite notices. Guards against a suite that silently tests nothing.

#ifndef GAMOW_MUTATE_JMINUS
#error "this binary only makes sense with GAMOW_MUTATE_JMINUS defined"
#endif

#include <cstdio>

#include "gamow/verify.hpp"

int main() {
    const auto rep = gamow::verify::run_verify();
    const int fails = rep.fail_count();
    std::printf("mutated build: %d of %zu checks fail\n", fails,
                rep.checks.size());
    for (const auto &c : rep.checks)
        if (!c.pass) std::printf("  FAIL %s\n", c.name.c_str());
    if (fails >= 3) {
        std::printf("mutation detected\n");
        return 0;
    }
    std::printf("mutation NOT detected\n");
    return 1;
}
