#include "weightlab/sampling.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace weightlab {

const WeightSpec* SampledWeight::spec() const noexcept {
  if (const auto* s = std::get_if<FromSpec>(&provenance)) return &s->spec;
  return nullptr;
}

SampledWeight sample(const WeightSpec& spec, const Grid& grid, const QuadratureConfig& quad) {
  quad.validate();
  const NormalForm nf = NormalForm::of(spec);
  const std::size_t n = grid.cells_per_side();
  std::vector<double> values(grid.cell_count());

  if (grid.dim() == 1) {
    check_integrability(nf, grid.lower(0), grid.upper(0));
    const double width = grid.cell_width(0);
    for_each_block(n, 256, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        values[i] = integrate_spec(nf, grid.cell_edge(0, i), grid.cell_edge(0, i + 1), quad) / width;
      }
    });
  } else {
    const double lo = std::min(grid.lower(0), grid.lower(1));
    const double hi = std::max(grid.upper(0), grid.upper(1));
    check_integrability(nf, lo, hi);
    if (!is_bounded(nf, lo, hi)) throw QuadratureError("2D sampling supports bounded specs only");
    const double volume = grid.cell_volume();
    for_each_block(grid.cell_count(), 64, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const CellIndex c = grid.unlinear(k);
        values[k] = integrate_spec_2d(spec, grid.cell_edge(0, c[0]), grid.cell_edge(0, c[0] + 1),
                                      grid.cell_edge(1, c[1]), grid.cell_edge(1, c[1] + 1), quad) /
                    volume;
      }
    });
  }
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 0.0)) throw QuadratureError("sampled cell average is not a positive finite number");
  }
  return {CellField(grid, std::move(values)), FromSpec{spec, quad}};
}

SampledWeight raw_weight(CellField field) { return {std::move(field), RawData{}}; }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t x = splitmix(seed);
  x = splitmix(x ^ a);
  x = splitmix(x ^ b);
  return splitmix(x ^ c);
}

double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const double u = static_cast<double>(hash_counter(seed, a, b, c) >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

std::uint64_t fingerprint(const CellField& field) {
  constexpr std::uint64_t prime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xff;
      h *= prime;
    }
  };
  const Grid& g = field.grid();
  mix(static_cast<std::uint64_t>(g.dim()));
  mix(g.cells_per_side());
  for (int axis = 0; axis < g.dim(); ++axis) {
    mix(std::bit_cast<std::uint64_t>(g.lower(axis)));
    mix(std::bit_cast<std::uint64_t>(g.upper(axis)));
  }
  for (double v : field.values()) mix(std::bit_cast<std::uint64_t>(v));
  return splitmix(h);
}

SampledWeight discrete_power(const SampledWeight& w, double exponent) {
  if (!std::isfinite(exponent)) throw PreconditionError("power exponent must be finite");
  std::vector<double> values(w.field.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::pow(w.field[i], exponent);
  return {CellField(w.grid(), std::move(values)), DiscretePower{exponent, fingerprint(w.field)}};
}

SampledWeight discrete_dual(const SampledWeight& w, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("dual exponent p must lie in (1, inf)");
  return discrete_power(w, 1.0 - p / (p - 1.0));
}

CellField discrete_product(std::span<const CellField> fields, std::span<const double> exponents) {
  if (fields.empty() || fields.size() != exponents.size()) throw ArityError("product needs one exponent per field");
  for (const auto& f : fields) require_same_grid(fields.front().grid(), f.grid(), "discrete product");
  std::vector<double> values(fields.front().size(), 1.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = 1.0;
    for (std::size_t k = 0; k < fields.size(); ++k) v *= std::pow(fields[k][i], exponents[k]);
    values[i] = v;
  }
  return CellField(fields.front().grid(), std::move(values));
}

SampledWeight random_weight(std::uint64_t seed, const Grid& grid, double roughness) {
  if (!(roughness >= 0.0 && roughness < 1.0)) throw PreconditionError("roughness must lie in [0, 1)");
  const int levels = grid.levels();
  const std::size_t n = grid.cells_per_side();
  std::vector<double> values(grid.cell_count());
  if (grid.dim() == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      double log_value = 0.0;
      for (int k = 1; k <= levels; ++k) {
        const std::size_t parent = i >> (levels - k + 1);
        const std::size_t child = (i >> (levels - k)) & 1U;
        const double eps = roughness * hash_unit(seed, static_cast<std::uint64_t>(k), parent, 0);
        log_value += child == 0 ? eps : -eps;
      }
      values[i] = std::exp(log_value);
    }
  } else {
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const CellIndex c = grid.unlinear(idx);
      double log_value = 0.0;
      for (int k = 1; k <= levels; ++k) {
        const int shift = levels - k;
        const std::size_t pi = c[0] >> (shift + 1);
        const std::size_t pj = c[1] >> (shift + 1);
        const std::size_t parent = (pi << (k - 1)) + pj;
        const std::size_t child = (((c[0] >> shift) & 1U) << 1) | ((c[1] >> shift) & 1U);
        double u[4];
        double mean = 0.0;
        for (std::size_t q = 0; q < 4; ++q) {
          u[q] = hash_unit(seed, static_cast<std::uint64_t>(k), parent, q);
          mean += 0.25 * u[q];
        }
        log_value += 0.5 * roughness * (u[child] - mean);
      }
      values[idx] = std::exp(log_value);
    }
  }
  return raw_weight(CellField(grid, std::move(values)));
}

void write_field_csv(std::ostream& out, const CellField& field) {
  const Grid& g = field.grid();
  out << "# grid dim=" << g.dim() << " n=" << g.cells_per_side() << " lo=" << format_number(g.lower(0));
  if (g.dim() == 2) out << ',' << format_number(g.lower(1));
  out << " hi=" << format_number(g.upper(0));
  if (g.dim() == 2) out << ',' << format_number(g.upper(1));
  out << '\n';
  for (double v : field.values()) out << format_number(v) << '\n';
}

namespace {

double parse_double(std::string_view text, std::size_t offset) {
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(offset, "malformed number '" + std::string(text) + "'");
  }
  return v;
}

Bounds parse_bounds(std::string_view text, int dim, std::size_t offset) {
  Bounds b{0.0, 0.0};
  if (dim == 1) {
    b[0] = parse_double(text, offset);
    return b;
  }
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw ParseError(offset, "2D bounds need two comma-separated values");
  b[0] = parse_double(text.substr(0, comma), offset);
  b[1] = parse_double(text.substr(comma + 1), offset + comma + 1);
  return b;
}

}  // namespace

CellField read_field_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(0, "missing grid header");
  std::istringstream tokens(header);
  std::string hash, word;
  tokens >> hash >> word;
  if (hash != "#" || word != "grid") throw ParseError(0, "expected '# grid'");
  int dim = 0;
  std::size_t n = 0;
  std::string lo_text, hi_text;
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    const std::size_t offset = header.find(token);
    if (eq == std::string::npos) throw ParseError(offset, "expected key=value");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "dim") {
      dim = static_cast<int>(parse_double(value, offset + eq + 1));
    } else if (key == "n") {
      n = static_cast<std::size_t>(parse_double(value, offset + eq + 1));
    } else if (key == "lo") {
      lo_text = value;
    } else if (key == "hi") {
      hi_text = value;
    } else {
      throw ParseError(offset, "unknown header key '" + key + "'");
    }
  }
  if (dim != 1 && dim != 2) throw ParseError(0, "header dim must be 1 or 2");
  if (lo_text.empty() || hi_text.empty()) throw ParseError(0, "header needs lo and hi");
  const Bounds lo = parse_bounds(lo_text, dim, header.find("lo="));
  const Bounds hi = parse_bounds(hi_text, dim, header.find("hi="));
  const Grid grid(dim, lo, hi, n);

  std::vector<double> values;
  values.reserve(grid.cell_count());
  std::size_t offset = header.size() + 1;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t start = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    values.push_back(parse_double(line, start));
  }
  if (values.size() != grid.cell_count()) {
    throw ParseError(offset, "expected " + std::to_string(grid.cell_count()) + " values, found " +
                                 std::to_string(values.size()));
  }
  return CellField(grid, std::move(values));
}

}  // namespace weightlab
