#include "healthguard/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace hg {
namespace {
int g_limit = 0;
}

int thread_limit() { return g_limit > 0 ? g_limit : omp_get_max_threads(); }

void configure_threads_from_env() {
    if (const char* env = std::getenv("HG_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) set_thread_limit(n);
        } catch (const std::exception&) {
            // malformed value: keep the runtime default
        }
    }
}

void set_thread_limit(int n) {
    g_limit = n;
    if (n > 0) omp_set_num_threads(n);
}

}  // namespace hg
