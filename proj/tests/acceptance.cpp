// Acceptance suite: one pass/fail line per criterion; exit 0 iff all pass.
// Placeholder; filled in once the unit suites are green.
#include <cstdio>

int main() {
    std::puts("acceptance: placeholder");
    return 1;
}
