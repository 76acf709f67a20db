#include "detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace coronakit::detail {
namespace {

// FFTW's planner is not reentrant; execution on new arrays is.
std::mutex planner_mutex;

fftw_plan plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(static_cast<size_t>(n));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

void run(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = plan_for(static_cast<int>(data.size()), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) { run(data, FFTW_FORWARD); }
void fft_backward(std::vector<std::complex<double>>& data) { run(data, FFTW_BACKWARD); }

}  // namespace coronakit::detail
