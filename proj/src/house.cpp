#include "tautring/house.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tautring {

HouseSpec HouseSpec::make(int genus, int d) {
  if (genus < 1) throw InputError("house: genus must be at least 1");
  if (d < 0) throw InputError("house: base dimension must be non-negative");
  HouseSpec h;
  h.genus = genus;
  h.d = d;
  for (int j = 0; j <= h.max_j(); ++j)
    for (int i = 0; i <= 2 * genus; ++i)
      if (h.contains({i, j})) h.blocks.push_back({i, j});
  return h;
}

bool HouseSpec::contains(Bidegree b) const {
  if (b.i < 0 || b.i > 2 * genus || b.j < 0) return false;
  if ((b.i + b.j) % 2) return false;
  return b.j <= std::min(b.i, 2 * genus - b.i) + 2 * d;
}

namespace {

std::map<Bidegree, std::size_t> dim_map(const DimensionTable* dims) {
  std::map<Bidegree, std::size_t> out;
  if (dims)
    for (const auto& r : dims->records) out[r.bidegree] = r.dim;
  return out;
}

std::string label(const std::map<Bidegree, std::size_t>& dm, bool annotate, Bidegree b) {
  if (!annotate) return "#";
  auto it = dm.find(b);
  return it == dm.end() ? "?" : std::to_string(it->second);
}

}  // namespace

std::string house_render(const HouseSpec& spec, const DimensionTable* dims, HouseFormat format) {
  auto dm = dim_map(dims);
  bool annotate = dims != nullptr;
  const int g = spec.genus;
  std::size_t w = 1;
  for (Bidegree b : spec.blocks) w = std::max(w, label(dm, annotate, b).size());
  w = std::max<std::size_t>(w, std::to_string(2 * g).size());
  std::ostringstream out;
  if (format == HouseFormat::Text) {
    std::size_t jw = std::to_string(spec.max_j()).size();
    for (int j = spec.max_j(); j >= 0; --j) {
      std::string line = std::string(jw - std::to_string(j).size(), ' ') + std::to_string(j) + " |";
      for (int i = 0; i <= 2 * g; ++i) {
        std::string cell = spec.contains({i, j}) ? label(dm, annotate, {i, j}) : ".";
        if (!spec.contains({i, j}) && (i + j) % 2) cell = " ";
        line += " " + std::string(w - cell.size(), ' ') + cell;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
    }
    out << std::string(jw + 1, ' ') << "+" << std::string((2 * g + 1) * (w + 1), '-') << "\n";
    std::string axis(jw + 2, ' ');
    for (int i = 0; i <= 2 * g; ++i) axis += " " + std::string(w - std::to_string(i).size(), ' ') + std::to_string(i);
    out << axis << "\n";
    return out.str();
  }
  const int cell = annotate ? 28 : 16;
  const int margin = 24;
  const int width = (2 * g + 1) * cell + 2 * margin;
  const int height = (spec.max_j() + 1) * cell + 2 * margin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<title>house g=" << g << " d=" << spec.d << "</title>\n";
  for (Bidegree b : spec.blocks) {
    int x = margin + b.i * cell;
    int y = margin + (spec.max_j() - b.j) * cell;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"#d8e4f0\" stroke=\"#34495e\" stroke-width=\"1\"/>\n";
    if (annotate)
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
          << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" << label(dm, true, b)
          << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tautring
