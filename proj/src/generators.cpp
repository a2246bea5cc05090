#include "pwls/generators.hpp"

#include <cmath>

namespace pwls {

void validate(const GenSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("GenSpec: n must be at least 1");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw InvalidArgument("GenSpec: density must lie in (0, 1]");
  if (!(spec.offdiag_scale >= 0.0)) throw InvalidArgument("GenSpec: offdiag_scale must be nonnegative");
}

std::string_view kind_name(GenKind k) {
  switch (k) {
    case GenKind::DenseSDD: return "dense";
    case GenKind::SparseSDD: return "sparse";
    case GenKind::SPD: return "spd";
    case GenKind::Diagonal: return "diagonal";
  }
  return "dense";
}

GenKind parse_kind(std::string_view name) {
  for (GenKind k : {GenKind::DenseSDD, GenKind::SparseSDD, GenKind::SPD, GenKind::Diagonal})
    if (kind_name(k) == name) return k;
  throw InvalidArgument("unknown generator kind '" + std::string(name) + "'");
}

nlohmann::json to_json(const GenSpec& spec) {
  return {{"n", spec.n},
          {"kind", std::string(kind_name(spec.kind))},
          {"density", spec.density},
          {"seed", spec.seed},
          {"diag_offset", spec.diag_offset},
          {"offdiag_scale", spec.offdiag_scale}};
}

GenSpec gen_spec_from_json(const nlohmann::json& j) {
  GenSpec s;
  s.n = j.at("n").get<std::size_t>();
  s.kind = parse_kind(j.at("kind").get<std::string>());
  s.density = j.value("density", s.density);
  s.seed = j.value("seed", s.seed);
  s.diag_offset = j.value("diag_offset", s.diag_offset);
  s.offdiag_scale = j.value("offdiag_scale", s.offdiag_scale);
  validate(s);
  return s;
}

Vector random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

PwlsProblem gen_dense_sdd(const GenSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      t(i, j) = spec.offdiag_scale * rng.uniform(-1.0, 1.0);
      row_sum += std::abs(t(i, j));
    }
    t(i, i) = spec.diag_offset + row_sum;
  }
  Vector b = random_vector(rng, n);
  return PwlsProblem(std::move(t), std::move(b));
}

PwlsProblem gen_sparse_sdd(const GenSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  // Off-diagonal positions are visited in row-major order with geometric
  // skips, which selects each independently with probability `density`.
  const std::size_t slots = n * (n - 1);
  const double log_miss = spec.density < 1.0 ? std::log1p(-spec.density) : 0.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> by_row(n);
  std::size_t pos = 0;
  while (true) {
    if (spec.density < 1.0) {
      const double u = 1.0 - rng.uniform01();  // (0, 1]
      pos += static_cast<std::size_t>(std::floor(std::log(u) / log_miss));
    }
    if (pos >= slots) break;
    const std::size_t i = pos / (n - 1);
    std::size_t j = pos % (n - 1);
    if (j >= i) ++j;
    by_row[i].emplace_back(j, spec.offdiag_scale * rng.uniform(-1.0, 1.0));
    ++pos;
  }
  std::vector<std::size_t> offsets(n + 1, 0), cols;
  Vector vals;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (const auto& e : by_row[i]) row_sum += std::abs(e.second);
    bool diag_done = false;
    for (const auto& [j, v] : by_row[i]) {
      if (!diag_done && j > i) {
        cols.push_back(i);
        vals.push_back(spec.diag_offset + row_sum);
        diag_done = true;
      }
      cols.push_back(j);
      vals.push_back(v);
    }
    if (!diag_done) {
      cols.push_back(i);
      vals.push_back(spec.diag_offset + row_sum);
    }
    offsets[i + 1] = cols.size();
  }
  Vector b = random_vector(rng, n);
  return PwlsProblem(SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals)), std::move(b));
}

PwlsProblem gen_spd(const GenSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  DenseMatrix t(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m(i, k) * m(j, k);
      t(i, j) = t(j, i) = s * inv_n;
    }
  for (std::size_t i = 0; i < n; ++i) t(i, i) += 0.1;
  Vector b = random_vector(rng, n);
  return PwlsProblem(std::move(t), std::move(b));
}

PwlsProblem gen_diagonal(const GenSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  Vector d(n);
  for (double& t : d) {
    do {
      t = rng.uniform(-3.0, 3.0);
    } while (std::abs(t) < 0.05 || std::abs(t + 1.0) < 0.05);
  }
  std::vector<std::size_t> offsets(n + 1), idx(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Vector b = random_vector(rng, n);
  return PwlsProblem(SparseMatrix(n, n, std::move(offsets), std::move(idx), std::move(d)), std::move(b));
}

PwlsProblem generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::DenseSDD: return gen_dense_sdd(spec);
    case GenKind::SparseSDD: return gen_sparse_sdd(spec);
    case GenKind::SPD: return gen_spd(spec);
    case GenKind::Diagonal: return gen_diagonal(spec);
  }
  throw InvalidArgument("unknown generator kind");
}

namespace {

struct Ratio {
  long num;
  long den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Vector from_ratios(std::initializer_list<Ratio> r) {
  Vector v;
  for (const auto& q : r) v.push_back(q.value());
  return v;
}

DenseMatrix hundredths(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t n = rows.size();
  std::vector<double> data;
  for (const auto& row : rows)
    for (long v : row) data.push_back(static_cast<double>(v) / 100.0);
  const std::size_t m = data.size() / n;
  return DenseMatrix(n, m, std::move(data));
}

}  // namespace

CanonicalInstance canonical(std::string_view name) {
  if (name == "spd_3cycle") {
    PwlsProblem p(hundredths({{32, -26, 21}, {-26, 33, -23}, {21, -23, 17}}),
                  from_ratios({{18, 100}, {-48, 100}, {30, 100}}));
    return {std::move(p),
            {from_ratios({{81894, 368395}, {-106782, 368395}, {11754, 73679}}),
             from_ratios({{-21902, 123765}, {-66598, 41255}, {-722, 24753}}),
             from_ratios({{-306, 95}, {18, 95}, {6, 1}})}};
  }
  if (name == "diagdom_nosolution") {
    PwlsProblem p(hundredths({{-26, 16}, {23, -33}}), from_ratios({{-12, 100}, {12, 100}}));
    return {std::move(p),
            {from_ratios({{-498, 2295}, {582, 2295}}), from_ratios({{498, 1055}, {18, 1055}}),
             from_ratios({{102, 245}, {-18, 245}}), from_ratios({{-102, 1405}, {-582, 1405}})}};
  }
  throw UnknownName("unknown canonical instance '" + std::string(name) + "'");
}

}  // namespace pwls
