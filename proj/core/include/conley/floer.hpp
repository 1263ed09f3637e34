#pragma once

// Floer complex of a gradient flow: critical points graded by their relative
// index, boundary given by mod-2 counts of connecting orbits located by
// shooting in the support of the nonlinearity.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conley/conley_index.hpp"
#include "conley/functional.hpp"
#include "conley/gf2.hpp"

namespace conley::floer {

using cubical::GradedZ2Space;
using functional::Box;
using functional::CriticalPoint;
using functional::FunctionalSpec;
using functional::TruncationLevel;
using functional::Vector;

struct ShootingParams {
  double epsilon = 1e-3;      // distance of the seeds from the source
  int seeds = 64;             // per dimension of the unstable sphere
  double t_max = 50.0;
  double basin = 0.1;         // arrival radius around a critical point
  double transv_tol = 1e-4;   // lower bound on the crossing derivative
  double time_step = 1e-2;
  std::uint64_t rng_seed = 0;
};

enum class Arrival { target, other, escaped };

struct LocatedOrbit {
  Vector seed;           // start point y + epsilon * direction
  Arrival arrival = Arrival::target;
  int arrival_point = -1;  // index into the known critical points, -1 if escaped
  /// -df/dt where the orbit crosses the middle level between the endpoints.
  double margin = 0.0;
  int crossing_sign = 0;
};

struct ConnectionReport {
  CriticalPoint source;  // y, the higher index
  CriticalPoint target;  // x
  int count = 0;         // parity of orbits.size()
  std::vector<LocatedOrbit> orbits;  // distinct orbits into the target
  int seeds_tried = 0;
  int escaped = 0;
  int elsewhere = 0;
};

/// Orbits from y to x, where e_index(y) = e_index(x) + 1. Seeds are placed on
/// the unstable sphere of y inside the support coordinates; `known` lists the
/// critical points used to classify arrivals (x and y are always included),
/// and trajectories leaving `region` count as escaped. Throws
/// PreconditionViolation, NonTransverse or Inconclusive.
ConnectionReport count_connecting_orbits(const FunctionalSpec& spec, const CriticalPoint& x, const CriticalPoint& y,
                                         const TruncationLevel& level, const ShootingParams& params = {},
                                         const std::optional<Box>& region = std::nullopt,
                                         const std::vector<CriticalPoint>& known = {});

struct FloerParams {
  ShootingParams shooting;
  functional::SeedSpec seeds;
  functional::Tolerances tol;
};

struct FloerComplex {
  TruncationLevel level;
  /// Sorted by (e_index, value).
  std::vector<CriticalPoint> generators;
  /// e_index -> indices into generators.
  std::map<int, std::vector<int>> by_index;
  /// k -> matrix of the boundary C_{k+1} -> C_k (rows: index k generators).
  std::map<int, gf2::BitMatrix> boundary;
  std::vector<ConnectionReport> connections;

  int rank(int k) const;
  const gf2::BitMatrix* boundary_at(int k) const;
};

FloerComplex build_floer_complex(const FunctionalSpec& spec, const Box& region, const TruncationLevel& level,
                                 const FloerParams& params = {});

/// True when every composite of consecutive boundary matrices vanishes.
bool boundary_squares_to_zero(const FloerComplex& complex);

/// Cohomology of the transposed boundary.
GradedZ2Space floer_cohomology(const FloerComplex& complex);

struct VerifyOptions {
  index::FlowParams flow;
  index::ConleyOptions conley;
  FloerParams floer;
  int resolution = 15;
  /// Replace the boundary by zero before taking cohomology (test hook).
  bool corrupt_boundary = false;
};

enum class Verdict { equal, unequal, inconclusive };
std::string to_string(Verdict v);

struct MainTheoremReport {
  FloerComplex complex;
  GradedZ2Space floer;
  index::IndexPair pair;
  index::ConleyIndexResult conley;
  std::map<int, bool> degree_equal;
  Verdict verdict = Verdict::inconclusive;
};

/// Floer cohomology against the Conley index of the region, both at `level`.
MainTheoremReport verify_main_theorem(const FunctionalSpec& spec, const Box& region, const TruncationLevel& level,
                                      const std::vector<TruncationLevel>& ladder, const VerifyOptions& options = {});

struct TripleLevel {
  TruncationLevel level;
  bool exact = false;
  /// Connecting map H(N1,N0) -> H(N2,N1), normalized degrees.
  std::map<int, int> delta_rank;
  GradedZ2Space outer, whole, inner;  // (N2,N1), (N2,N0), (N1,N0), normalized
};

struct SublevelTriple {
  index::IndexPair outer;  // (N2, N1), around the upper critical point
  index::IndexPair inner;  // (N1, N0), around the lower one
  double b = 0.0;
  std::vector<TripleLevel> levels;
  bool exact_everywhere = false;
};

/// Splits an index pair (N2, N0) for two critical points x, y with
/// f(x) < b < f(y) by N1 = forward hull in N2 of N0 and the cubes whose
/// centre lies in f <= b, then checks the triple sequence on the product
/// extension at every ladder level.
SublevelTriple sublevel_triple(const FunctionalSpec& spec, const index::IndexPair& pair,
                               const index::MultivaluedMap& map, const CriticalPoint& x, const CriticalPoint& y,
                               double b, const std::vector<TruncationLevel>& ladder,
                               const index::ProductDiscs& discs = {});

}  // namespace conley::floer
