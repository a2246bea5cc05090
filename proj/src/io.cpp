#include "pwls/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pwls {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  return out;
}

struct Header {
  bool coordinate = true;
  bool symmetric = false;
};

// Reads the next line that is neither blank nor a comment.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

Header parse_header(const std::string& line, const std::string& path) {
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
    throw ParseError(path, 1, "missing %%MatrixMarket matrix banner");
  Header h;
  format = lower(format);
  if (format == "array")
    h.coordinate = false;
  else if (format != "coordinate")
    throw ParseError(path, 1, "unsupported format '" + format + "'");
  field = lower(field);
  if (field != "real" && field != "integer" && field != "double")
    throw ParseError(path, 1, "unsupported field '" + field + "'");
  symmetry = lower(symmetry);
  if (symmetry == "symmetric")
    h.symmetric = true;
  else if (symmetry != "general")
    throw ParseError(path, 1, "unsupported symmetry '" + symmetry + "'");
  return h;
}

double parse_number(const std::string& tok, const std::string& path, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path, lineno, "invalid number '" + tok + "'");
  }
}

Matrix penta_from_triplets(std::size_t n, const std::vector<Triplet>& entries, const std::string& path) {
  const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (m * m != n) throw ParseError(path, 0, "penta storage needs order m*m, got " + std::to_string(n));
  Vector diag(n, 0.0), l1(n - 1, 0.0), u1(n - 1, 0.0), lm(n - m, 0.0), um(n - m, 0.0);
  for (const auto& t : entries) {
    if (t.row == t.col)
      diag[t.row] += t.value;
    else if (t.col == t.row + 1)
      u1[t.row] += t.value;
    else if (t.row == t.col + 1)
      l1[t.col] += t.value;
    else if (t.col == t.row + m)
      um[t.row] += t.value;
    else if (t.row == t.col + m)
      lm[t.col] += t.value;
    else
      throw ParseError(path, 0,
                       "entry (" + std::to_string(t.row + 1) + "," + std::to_string(t.col + 1) + ") outside the penta band");
  }
  if (l1 == u1 && lm == um) return PentaBandMatrix::symmetric(m, std::move(diag), std::move(u1), std::move(um));
  return PentaBandMatrix::general(m, std::move(diag), std::move(l1), std::move(u1), std::move(lm), std::move(um));
}

}  // namespace

Matrix read_matrix_market(const fs::path& path, std::optional<StorageKind> as) {
  const std::string name = path.string();
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(name, 1, "empty file");
  const Header h = parse_header(line, name);
  if (!next_data_line(in, line, lineno)) throw ParseError(name, lineno, "missing size line");
  std::istringstream ss(line);
  std::size_t nr = 0, nc = 0, nnz = 0;
  if (!(ss >> nr >> nc) || (h.coordinate && !(ss >> nnz))) throw ParseError(name, lineno, "malformed size line");
  if (h.symmetric && nr != nc) throw ParseError(name, lineno, "symmetric matrix must be square");

  std::vector<Triplet> entries;
  if (h.coordinate) {
    entries.reserve(h.symmetric ? 2 * nnz : nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno))
        throw ParseError(name, lineno, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
      std::istringstream es(line);
      std::string si, sj, sv;
      if (!(es >> si >> sj >> sv)) throw ParseError(name, lineno, "malformed entry");
      const double fi = parse_number(si, name, lineno), fj = parse_number(sj, name, lineno);
      if (fi < 1 || fj < 1 || fi > static_cast<double>(nr) || fj > static_cast<double>(nc))
        throw ParseError(name, lineno, "index out of range");
      const auto i = static_cast<std::size_t>(fi) - 1, j = static_cast<std::size_t>(fj) - 1;
      const double v = parse_number(sv, name, lineno);
      if (!std::isfinite(v)) throw ParseError(name, lineno, "non-finite value");
      entries.push_back({i, j, v});
      if (h.symmetric && i != j) entries.push_back({j, i, v});
    }
  } else {
    // Column-major; symmetric arrays list the lower triangle only.
    std::vector<double> dense(nr * nc, 0.0);
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t i = h.symmetric ? j : 0; i < nr; ++i) {
        if (!next_data_line(in, line, lineno)) throw ParseError(name, lineno, "too few array entries");
        std::istringstream es(line);
        std::string sv;
        es >> sv;
        const double v = parse_number(sv, name, lineno);
        if (!std::isfinite(v)) throw ParseError(name, lineno, "non-finite value");
        dense[i * nc + j] = v;
        if (h.symmetric) dense[j * nc + i] = v;
      }
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        if (dense[i * nc + j] != 0.0) entries.push_back({i, j, dense[i * nc + j]});
  }

  const StorageKind kind = as.value_or(h.coordinate ? StorageKind::Sparse : StorageKind::Dense);
  switch (kind) {
    case StorageKind::Sparse: return SparseMatrix::from_triplets(nr, nc, std::move(entries));
    case StorageKind::Dense: {
      DenseMatrix d(nr, nc);
      for (const auto& t : entries) d(t.row, t.col) += t.value;
      return d;
    }
    case StorageKind::Penta:
      if (nr != nc) throw ParseError(name, 0, "penta storage needs a square matrix");
      return penta_from_triplets(nr, entries, name);
  }
  throw ParseError(name, 0, "unknown storage kind");
}

void write_matrix_market(const fs::path& path, const Matrix& a) {
  auto out = open_out(path);
  const std::size_t nr = rows(a), nc = cols(a);
  if (const auto* d = std::get_if<DenseMatrix>(&a)) {
    out << "%%MatrixMarket matrix array real general\n" << nr << ' ' << nc << '\n';
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t i = 0; i < nr; ++i) out << format_double((*d)(i, j)) << '\n';
    return;
  }
  const auto* p = std::get_if<PentaBandMatrix>(&a);
  const bool sym = p && p->is_symmetric();
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < nr; ++i)
    for_each_in_row(a, i, [&](std::size_t j, double v) {
      if (!sym || j <= i) entries.push_back({i, j, v});
    });
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
  out << nr << ' ' << nc << ' ' << entries.size() << '\n';
  for (const auto& t : entries) out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_double(t.value) << '\n';
}

Vector read_vector(const fs::path& path) {
  const std::string name = path.string();
  auto in = open_in(path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("%%", 0) == 0) {
    const Matrix m = read_matrix_market(path, StorageKind::Dense);
    if (cols(m) != 1) throw ParseError(name, 0, "vector file must have exactly one column");
    const auto& d = std::get<DenseMatrix>(m);
    return d.data();
  }
  Vector v;
  std::size_t lineno = 0;
  std::string line = first;
  bool have = true;
  while (have) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#' || tok[0] == '%') break;
      const double x = parse_number(tok, name, lineno);
      if (!std::isfinite(x)) throw ParseError(name, lineno, "non-finite value");
      v.push_back(x);
    }
    have = static_cast<bool>(std::getline(in, line));
  }
  return v;
}

void write_vector(const fs::path& path, std::span<const double> v) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
  for (double x : v) out << format_double(x) << '\n';
}

fs::path save_problem(const fs::path& dir, const PwlsProblem& p, const nlohmann::json& extra) {
  fs::create_directories(dir);
  write_matrix_market(dir / "T.mtx", p.matrix());
  write_vector(dir / "b.mtx", p.rhs());
  nlohmann::json manifest = extra.is_object() ? extra : nlohmann::json::object();
  manifest["matrix"] = "T.mtx";
  manifest["rhs"] = "b.mtx";
  manifest["storage"] = std::string(storage_name(p.storage()));
  manifest["n"] = p.size();
  if (const auto* pb = std::get_if<PentaBandMatrix>(&p.matrix())) manifest["grid_side"] = pb->grid_side();
  const fs::path manifest_path = dir / "manifest.json";
  write_json(manifest_path, manifest);
  return manifest_path;
}

LoadedProblem load_problem(const fs::path& manifest_path) {
  nlohmann::json manifest = read_json(manifest_path);
  const std::string name = manifest_path.string();
  if (!manifest.contains("matrix") || !manifest.contains("rhs"))
    throw ParseError(name, 0, "manifest must name 'matrix' and 'rhs'");
  const fs::path base = manifest_path.parent_path();
  const fs::path tpath = base / manifest["matrix"].get<std::string>();
  const fs::path bpath = base / manifest["rhs"].get<std::string>();
  std::optional<StorageKind> kind;
  if (manifest.contains("storage")) kind = parse_storage(manifest["storage"].get<std::string>());
  Matrix t = read_matrix_market(tpath, kind);
  Vector b = read_vector(bpath);
  try {
    return {PwlsProblem(std::move(t), std::move(b)), std::move(manifest)};
  } catch (const DimensionMismatch& e) {
    throw ParseError(name, 0, e.what());
  }
}

nlohmann::json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace pwls
