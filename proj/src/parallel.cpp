#include "seedseg/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seedseg {

void setKernelThreads(int n) {
#ifdef _OPENMP
    static const int defaultThreads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : defaultThreads);
#else
    (void)n;
#endif
}

int kernelThreads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int applyThreadEnv() {
    if (const char* env = std::getenv("SEEDSEG_THREADS")) {
        try {
            setKernelThreads(std::stoi(env));
        } catch (const std::exception&) {
            // unparsable value: keep the default
        }
    }
    return kernelThreads();
}

}  // namespace seedseg
