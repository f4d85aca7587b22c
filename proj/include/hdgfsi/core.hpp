// Common scalar/vector types, error type and the element-parallel loop helper
// shared by all hdgfsi components.

#ifndef HDGFSI_CORE_HPP
#define HDGFSI_CORE_HPP

#include <Eigen/Dense>

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hdgfsi {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Subdomain a mesh element belongs to.
enum class Phase { fluid, solid };

/// All recoverable failures (bad input files, singular solves, ...) surface
/// as this exception; the CLI maps it to a nonzero exit code.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline int thread_cap_from_env() {
  const char* env = std::getenv("HDG_FSI_THREADS");
  if (env == nullptr) return 0;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

} // namespace detail

/// Number of worker threads used by element-parallel loops. Capped by the
/// HDG_FSI_THREADS environment variable.
inline int parallel_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  const int cap = detail::thread_cap_from_env();
  if (cap > 0 && cap < n) n = cap;
  return n;
}

/// Runs body(i) for i in [0, n). Work items must write to disjoint storage;
/// callers that accumulate into shared data do so in a deterministic
/// sequential pass afterwards, so results are independent of thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int nthreads = parallel_thread_count();
  if (nthreads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(nthreads));
  const std::size_t chunk = (n + static_cast<std::size_t>(nthreads) - 1) / static_cast<std::size_t>(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    const std::size_t begin = static_cast<std::size_t>(t) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end]() {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

namespace testing {

/// Fault-injection switches consumed by assembly/materials. Only the
/// verification suites flip these, to prove the property tests can fail.
struct DefectFlags {
  bool flip_stabilization_sign = false;
  bool perturb_fluid_compliance = false;
};

inline DefectFlags& defects() {
  static DefectFlags flags;
  return flags;
}

} // namespace testing

} // namespace hdgfsi

#endif
