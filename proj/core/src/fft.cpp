#include "semimax/fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace semimax::fft {

namespace {

// FFTW planning is not thread safe; executing a plan on new arrays is.
std::mutex plan_mutex;

fftw_plan plan_for(const std::array<int, 3>& shape, int sign,
                   fftw_complex* buf) {
  static std::map<std::tuple<int, int, int, int>, fftw_plan> cache;
  const auto key = std::make_tuple(shape[0], shape[1], shape[2], sign);
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int dims[3];
  int rank = 0;
  for (int a = 0; a < 3; ++a)
    if (shape[static_cast<size_t>(a)] > 1) dims[rank++] = shape[static_cast<size_t>(a)];
  if (rank == 0) return nullptr;

  // FFTW_ESTIMATE does not touch the buffer, so planning on the caller's
  // data is safe; FFTW_UNALIGNED keeps the plan reusable for any array.
  fftw_plan p = fftw_plan_dft(rank, dims, buf, buf,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fft: planning failed");
  cache.emplace(key, p);
  return p;
}

}  // namespace

void transform(std::complex<double>* data, const std::array<int, 3>& shape,
               int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("fft: sign must be +1 or -1");
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan p = plan_for(shape, sign, buf);
  if (!p) return;  // all axes inactive
  fftw_execute_dft(p, buf, buf);
}

}  // namespace semimax::fft
