#pragma once

// Seeded instance generators and the built-in counterexample instances.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard; doubles are formed from the top 53 bits so that every
// instance is bit-reproducible across platforms and standard libraries.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pwls/core.hpp"

namespace pwls {

enum class GenKind { DenseSDD, SparseSDD, SPD, Diagonal };

struct GenSpec {
  std::size_t n = 10;
  GenKind kind = GenKind::DenseSDD;
  /// Off-diagonal fill fraction, SparseSDD only.
  double density = 0.003;
  std::uint64_t seed = 0;
  /// Added to the absolute off-diagonal row sum to form t_ii.
  double diag_offset = 1.001;
  /// Off-diagonal magnitude bound; below 1 gives the nearly diagonal family.
  double offdiag_scale = 1.0;
};

void validate(const GenSpec& spec);

/// CLI spelling: dense, sparse, spd, diagonal.
std::string_view kind_name(GenKind k);
GenKind parse_kind(std::string_view name);

nlohmann::json to_json(const GenSpec& spec);
GenSpec gen_spec_from_json(const nlohmann::json& j);

/// Portable uniform sampling on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Vector with entries uniform on [lo, hi).
Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0);

PwlsProblem gen_dense_sdd(const GenSpec& spec);
PwlsProblem gen_sparse_sdd(const GenSpec& spec);
PwlsProblem gen_spd(const GenSpec& spec);
/// Diagonal T with entries uniform on [-3, 3] kept away from 0 and -1.
PwlsProblem gen_diagonal(const GenSpec& spec);
PwlsProblem generate(const GenSpec& spec);

class UnknownName : public Error {
 public:
  using Error::Error;
};

struct CanonicalInstance {
  PwlsProblem problem;
  /// spd_3cycle: the cycle x, y, z, stored as exact Newton images of one
  /// another. diagdom_nosolution: x, y, z, w, the two 2-cycles being (x, y)
  /// and (z, w).
  std::vector<Vector> witness;
};

inline constexpr std::string_view kCanonicalNames[] = {"spd_3cycle", "diagdom_nosolution"};

CanonicalInstance canonical(std::string_view name);

}  // namespace pwls
