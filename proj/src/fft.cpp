#include "swe/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace swe {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans live for the whole process; fftw_plan creation is not thread-safe.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int dim, int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({dim, n});
    if (it != plans_.end()) return it->second;
    const std::size_t total = dim == 1 ? static_cast<std::size_t>(n)
                                       : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    if (dim == 1) {
      p.forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
      p.backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    } else {
      p.forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
      p.backward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    }
    fftw_free(buf);
    plans_.emplace(std::make_pair(dim, n), p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

std::size_t expected_size(int dim, int band) {
  const auto n = static_cast<std::size_t>(2 * band);
  return dim == 1 ? n : n * n;
}

void check_size(std::size_t got, int dim, int band) {
  if (got != expected_size(dim, band))
    throw std::invalid_argument("transform size mismatch: got " + std::to_string(got) +
                                " values, band " + std::to_string(band) + " in " +
                                std::to_string(dim) + "D needs " +
                                std::to_string(expected_size(dim, band)));
}

void execute(fftw_plan plan, std::vector<Complex>& data) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> samples, int dim, int band) {
  check_size(samples.size(), dim, band);
  std::vector<Complex> data(samples.begin(), samples.end());
  execute(PlanCache::instance().get(dim, 2 * band).forward, data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  return data;
}

std::vector<Complex> forward(std::span<const double> samples, int dim, int band) {
  check_size(samples.size(), dim, band);
  std::vector<Complex> data(samples.begin(), samples.end());
  execute(PlanCache::instance().get(dim, 2 * band).forward, data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  return data;
}

std::vector<Complex> inverse_complex(std::span<const Complex> coeffs, int dim, int band) {
  check_size(coeffs.size(), dim, band);
  std::vector<Complex> data(coeffs.begin(), coeffs.end());
  execute(PlanCache::instance().get(dim, 2 * band).backward, data);
  return data;
}

std::vector<double> inverse(std::span<const Complex> coeffs, int dim, int band) {
  const auto data = inverse_complex(coeffs, dim, band);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return out;
}

SpectralState state_from_samples(std::span<const double> u, std::span<const double> v, int dim,
                                 int band) {
  SpectralState s(dim, band);
  const auto uh = forward(u, dim, band);
  const auto vh = forward(v, dim, band);
  std::copy(uh.begin(), uh.end(), s.u().begin());
  std::copy(vh.begin(), vh.end(), s.v().begin());
  return s;
}

}  // namespace swe
