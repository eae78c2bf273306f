// Prints one PASS/FAIL line per acceptance criterion. Arguments select
// criteria by number; no arguments runs all of them.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "magspec/acceptance.hpp"

int main(int argc, char** argv) {
    using namespace magspec::acceptance;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) ids.push_back(i);
    int failed = 0;
    for (int id : ids) {
        if (id < 1 || id > static_cast<int>(criteria().size())) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        const auto r = run_one(id);
        std::printf("%s\n", format_line(r).c_str());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
    return failed ? 1 : 0;
}
