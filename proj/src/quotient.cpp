#include "tautring/quotient.hpp"

#include <algorithm>

namespace tautring {

long DimensionTable::dim_at_codim(int c) const {
  if (c < 0 || c > completed_codim) return -1;
  long d = 0;
  for (const auto& r : records)
    if (r.codim == c) d += static_cast<long>(r.dim);
  return d;
}

std::vector<std::size_t> DimensionTable::dims_by_codim() const {
  std::vector<std::size_t> out(completed_codim + 1, 0);
  for (const auto& r : records)
    if (r.codim <= completed_codim) out[r.codim] += r.dim;
  return out;
}

SocleInfo socle_check(const DimensionTable& table) {
  SocleInfo s;
  s.codim = socle_codim(table.mode, table.genus);
  if (table.completed_codim < s.codim)
    throw PreconditionError("table does not reach the socle codimension " + std::to_string(s.codim));
  for (const auto& r : table.records) {
    if (r.codim != s.codim || r.dim == 0) continue;
    s.dim += r.dim;
    s.location.push_back(r.bidegree);
  }
  return s;
}

std::vector<std::string> PairingReport::missing_lines() const {
  std::map<int, std::size_t> missing;
  for (const auto& r : pairings) {
    if (r.missing_left) missing[r.codim] = r.missing_left;
    if (r.missing_right) missing[socle.codim - r.codim] = r.missing_right;
  }
  std::vector<std::string> out;
  for (const auto& [c, k] : missing) out.push_back("codim " + std::to_string(c) + ": " + std::to_string(k) + " missing");
  return out;
}

std::vector<std::size_t> sympow_dimensions(int g, int n, const std::vector<std::size_t>& dims) {
  if (n < 2 * g - 1) throw InputError("symmetric powers need n >= 2g - 1 = " + std::to_string(2 * g - 1));
  if (dims.size() < static_cast<std::size_t>(2 * g))
    throw PreconditionError("dimensions of the full ring are needed through codimension " + std::to_string(2 * g - 1));
  std::vector<std::size_t> out;
  for (int i = 0; i <= g - 1 + n; ++i) {
    std::size_t d = 0;
    for (int j = std::max(0, i - 2 * g + 1); j <= std::min(i, n - g); ++j) d += dims[i - j];
    out.push_back(d);
  }
  return out;
}

TransferReport gorenstein_transfer(const PairingReport& t, int g, int n) {
  if (n < 2 * g - 1) throw InputError("symmetric powers need n >= 2g - 1 = " + std::to_string(2 * g - 1));
  TransferReport r;
  r.genus = g;
  r.n = n;
  r.note = "Gorenstein at n implies Gorenstein at n - 1";
  if (t.socle.dim != 1) {
    r.gorenstein = false;
    r.defects.push_back("socle dimension " + std::to_string(t.socle.dim));
    return r;
  }
  r.gorenstein = t.gorenstein;
  std::map<int, std::size_t> missing;
  for (const auto& p : t.pairings) {
    if (p.missing_left) missing[p.codim] = p.missing_left;
    if (p.missing_right) missing[t.socle.codim - p.codim] = p.missing_right;
  }
  // The codim a block sits in degree a + j, multiplied by xi^j.
  for (const auto& [a, k] : missing)
    for (int j = 0; j <= n - g; ++j)
      r.defects.push_back("degree " + std::to_string(a + j) + ": " + std::to_string(k) + " missing (codim " +
                          std::to_string(a) + " block, xi^" + std::to_string(j) + ")");
  return r;
}

}  // namespace tautring
