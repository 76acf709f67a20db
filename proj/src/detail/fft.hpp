#pragma once

#include <complex>
#include <vector>

namespace coronakit::detail {

// Unnormalized DFT, forward uses exp(-2 pi i k q / n). Thread-safe.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_backward(std::vector<std::complex<double>>& data);

}  // namespace coronakit::detail
