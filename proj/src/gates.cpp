#include "epsim/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace epsim {

Matrix gate_cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Matrix gate_hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

Matrix gate_u_oxford(Side side) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex off = side == Side::alice ? Complex(0.0, -s) : Complex(0.0, s);
  Matrix m(2, 2);
  m << s, off, off, s;
  return m;
}

RolePermutationTable::RolePermutationTable(std::vector<std::vector<int>> slots) : slots_(std::move(slots)) {
  if (slots_.size() < 2) throw std::invalid_argument("role table needs at least two control values");
  const std::size_t n = slots_.front().size();
  if (n == 0) throw std::invalid_argument("role table has no slots");
  for (const auto& row : slots_) {
    if (row.size() != n) throw std::invalid_argument("role table rows differ in length");
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < n; ++k) {
      if (sorted[k] != static_cast<int>(k)) throw std::invalid_argument("role table row is not a permutation");
    }
  }
}

RolePermutationTable RolePermutationTable::swap_pair() { return RolePermutationTable({{0, 1}, {1, 0}}); }

RolePermutationTable RolePermutationTable::fredkin(int control_dim) {
  if (control_dim < 2) throw std::invalid_argument("control dimension must be at least 2");
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < control_dim; ++i) {
    std::vector<int> row(control_dim);
    std::iota(row.begin(), row.end(), 0);
    std::swap(row[0], row[i]);
    rows.push_back(std::move(row));
  }
  return RolePermutationTable(std::move(rows));
}

RolePermutationTable RolePermutationTable::cyclic(int slots) {
  if (slots < 2) throw std::invalid_argument("cyclic table needs at least two slots");
  std::vector<std::vector<int>> rows;
  for (int k = 0; k < slots; ++k) {
    std::vector<int> row(slots);
    for (int pos = 0; pos < slots; ++pos) row[pos] = (pos + k) % slots;
    rows.push_back(std::move(row));
  }
  return RolePermutationTable(std::move(rows));
}

RolePermutationTable RolePermutationTable::all_permutations(int slots) {
  if (slots < 2) throw std::invalid_argument("permutation table needs at least two slots");
  std::vector<int> row(slots);
  std::iota(row.begin(), row.end(), 0);
  std::vector<std::vector<int>> rows;
  do {
    rows.push_back(row);
  } while (std::next_permutation(row.begin(), row.end()));
  return RolePermutationTable(std::move(rows));
}

Matrix gate_cswap(const RolePermutationTable& table) {
  const int d = table.control_dim();
  const int n = table.num_slots();
  const Index block = Index{1} << n;
  Matrix u = Matrix::Zero(d * block, d * block);
  for (int k = 0; k < d; ++k) {
    const auto& perm = table.permutation(k);
    for (Index bits = 0; bits < block; ++bits) {
      // slot 0 is the most significant qubit
      Index moved = 0;
      for (int pos = 0; pos < n; ++pos) {
        const Index bit = (bits >> (n - 1 - perm[pos])) & 1;
        moved |= bit << (n - 1 - pos);
      }
      u(k * block + moved, k * block + bits) = 1.0;
    }
  }
  return u;
}

}  // namespace epsim
