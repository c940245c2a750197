#pragma once

namespace seedseg {

/// Caps the thread count used by the row-parallel kernels (convolution and
/// assembly). n <= 0 restores the OpenMP default. No-op without OpenMP.
void setKernelThreads(int n);
int kernelThreads();

/// Applies SEEDSEG_THREADS from the environment when set; returns the cap in effect.
int applyThreadEnv();

}  // namespace seedseg
