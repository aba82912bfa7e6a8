// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_MATRIX_MARKET_HPP
#define MOR_MATRIX_MARKET_HPP

#include <string>

#include "mor/types.hpp"

namespace mor
{

/// Matrix Market exchange format: coordinate and array layouts, real and
/// complex fields, general/symmetric/hermitian symmetry.
SpMat load_market_sparse(const std::string &path);
MatC load_market_dense(const std::string &path);

void save_market_sparse(const SpMat &M, const std::string &path,
                        bool symmetric = false);
void save_market_dense(const MatC &M, const std::string &path);

} // namespace mor

#endif // MOR_MATRIX_MARKET_HPP
