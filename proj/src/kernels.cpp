#include "dbmorph/kernels.hpp"

#include <exception>
#include <limits>

#include <omp.h>

#include "dbmorph/errors.hpp"

namespace dbmorph {

namespace {

void for_each_serial(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

void for_each_parallel(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(dbmorph_kernel_error)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
  if (exec == Execution::Serial || n < 2)
    for_each_serial(n, body);
  else
    for_each_parallel(n, body);
}

std::size_t product_size(std::span<const std::size_t> sizes) {
  std::size_t total = 1;
  for (std::size_t s : sizes) {
    if (s == 0) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / s) throw PreconditionError("domain product too large");
    total *= s;
  }
  return total;
}

void decode_product_index(std::size_t flat, std::span<const std::size_t> sizes, std::span<std::size_t> out) {
  for (std::size_t k = sizes.size(); k-- > 0;) {
    out[k] = flat % sizes[k];
    flat /= sizes[k];
  }
}

std::vector<Tuple> product_apply(std::span<const std::size_t> sizes,
                                 const std::function<Tuple(std::span<const std::size_t>)>& f, Execution exec) {
  const std::size_t total = product_size(sizes);
  std::vector<Tuple> out(total);
  for_each_index(
      total,
      [&](std::size_t flat) {
        std::vector<std::size_t> idx(sizes.size());
        decode_product_index(flat, sizes, idx);
        out[flat] = f(idx);
      },
      exec);
  return out;
}

}  // namespace dbmorph
