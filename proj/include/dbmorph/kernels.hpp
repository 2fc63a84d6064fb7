#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dbmorph/value.hpp"

namespace dbmorph {

/// Selects the serial reference kernel or its OpenMP counterpart. Both
/// produce identical results; the parallel one merges per-index results in
/// index order.
enum class Execution { Serial, Parallel };

/// Runs body(i) for every i in [0, n). In parallel mode the first exception
/// (by index) thrown by any body is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec);

/// Number of points of the mixed-radix product of `sizes` (1 for no factors).
std::size_t product_size(std::span<const std::size_t> sizes);

/// Decodes a flat product index into per-factor indices, first factor most
/// significant.
void decode_product_index(std::size_t flat, std::span<const std::size_t> sizes, std::span<std::size_t> out);

/// Evaluates f at every point of the product of index ranges [0, sizes[k])
/// and returns the results in flat-index order.
std::vector<Tuple> product_apply(std::span<const std::size_t> sizes,
                                 const std::function<Tuple(std::span<const std::size_t>)>& f, Execution exec);

}  // namespace dbmorph
