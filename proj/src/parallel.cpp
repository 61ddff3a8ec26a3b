#include "sturmspec/parallel.hpp"

#include "sturmspec/real.hpp"

#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace sturm {

void parallel_for(std::size_t n, unsigned nthreads,
                  const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (nthreads == 0) nthreads = 1;
  if (static_cast<std::size_t>(nthreads) > n)
    nthreads = static_cast<unsigned>(n);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  const unsigned digits = precision_digits();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::exception_ptr> first_error(nthreads);
  std::vector<std::size_t> error_item(nthreads, none);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      Real::default_precision(digits);
      for (std::size_t i = t; i < n; i += nthreads) {
        try {
          body(i);
        } catch (...) {
          first_error[t] = std::current_exception();
          error_item[t] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  std::size_t best = none;
  std::exception_ptr winner;
  for (unsigned t = 0; t < nthreads; ++t) {
    if (first_error[t] && error_item[t] < best) {
      best = error_item[t];
      winner = first_error[t];
    }
  }
  if (winner) std::rethrow_exception(winner);
}

}  // namespace sturm
