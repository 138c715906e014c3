#pragma once

#include "jlab/rational.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jlab {

/// Coefficients of a (1,1)-class in the basis of its GeometryModel.
using ClassVector = std::vector<Rational>;

/// Fully symmetric multilinear form on a rank-r space, stored sparsely by
/// sorted index tuples. Missing entries are zero.
class SymmetricTable {
 public:
  SymmetricTable() = default;
  SymmetricTable(int arity, int rank);

  int arity() const { return arity_; }
  int rank() const { return rank_; }

  /// Sets the entry for every permutation of `index`.
  void set(std::vector<int> index, const Rational& value);
  Rational at(std::vector<int> index) const;
  const std::map<std::vector<int>, Rational>& entries() const { return entries_; }

  /// Multilinear evaluation on `arity` class vectors.
  Rational evaluate(std::span<const ClassVector> classes) const;

  bool operator==(const SymmetricTable& other) const;

 private:
  int arity_ = 0;
  int rank_ = 0;
  std::map<std::vector<int>, Rational> entries_;
};

/// An m-dimensional subvariety Z, known through Z . (D_1 ... D_m).
struct SubvarietyRecord {
  std::string name;
  int m = 1;
  SymmetricTable cap;
};

/// A curve C, given by the functional D -> D . C on the class space.
struct CurveRecord {
  std::string name;
  ClassVector dual;
};

class GeometryModel {
 public:
  GeometryModel(int n, std::vector<std::string> basis, SymmetricTable top,
                std::vector<SubvarietyRecord> subvarieties, std::vector<CurveRecord> curves,
                std::optional<ClassVector> canonical = std::nullopt);

  int n() const { return n_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const std::vector<std::string>& basis() const { return basis_; }
  const SymmetricTable& top() const { return top_; }
  const std::vector<SubvarietyRecord>& subvarieties() const { return subvarieties_; }
  const std::vector<CurveRecord>& curves() const { return curves_; }
  const std::optional<ClassVector>& canonical() const { return canonical_; }

  /// Copy with the subvariety list replaced.
  GeometryModel with_subvarieties(std::vector<SubvarietyRecord> subvarieties) const;

  void check_class(const ClassVector& c, const char* what) const;

 private:
  int n_;
  std::vector<std::string> basis_;
  SymmetricTable top_;
  std::vector<SubvarietyRecord> subvarieties_;
  std::vector<CurveRecord> curves_;
  std::optional<ClassVector> canonical_;
};

/// Top intersection number of exactly n classes.
Rational intersect(const GeometryModel& geometry, std::span<const ClassVector> classes);
/// Z . (D_1 ... D_m) for exactly m classes.
Rational cap(const GeometryModel& geometry, const SubvarietyRecord& z,
             std::span<const ClassVector> classes);

/// alpha^{k} . beta^{l} on X (k + l = n).
Rational mixed_power(const GeometryModel& geometry, const ClassVector& alpha, int k,
                     const ClassVector& beta, int l);
/// Z . alpha^{k} . beta^{l} (k + l = m).
Rational mixed_power(const GeometryModel& geometry, const SubvarietyRecord& z,
                     const ClassVector& alpha, int k, const ClassVector& beta, int l);

/// c = alpha^{n-1}.beta / alpha^n.
Rational normalization_ratio(const GeometryModel& geometry, const ClassVector& alpha,
                             const ClassVector& beta);
/// c <= 1, the normalisation hypothesis for a single component.
bool normalization_bound_holds(const GeometryModel& geometry, const ClassVector& alpha,
                               const ClassVector& beta);

/// alpha^n > 0 and alpha . C > 0 for every listed curve.
bool kahler_test(const GeometryModel& geometry, const ClassVector& alpha);
/// beta . C >= 0 for every listed curve.
bool nef_test(const GeometryModel& geometry, const ClassVector& beta);

enum class Classification {
  kUniformlyJPositive,
  kJPositive,
  kJNef,
  kFails,
};

const char* to_string(Classification c);

struct SlopeEntry {
  std::string name;
  int m = 1;
  /// Empty when Z . alpha^m <= 0 (a Kahler-cone violation).
  std::optional<Rational> slope;
  /// global slope - slope.
  std::optional<Rational> margin;
  bool kahler_violation = false;
};

struct Verdict {
  Classification classification = Classification::kFails;
  Rational c;
  Rational global_slope;
  Rational epsilon;
  std::vector<SlopeEntry> per_z;
  std::optional<std::string> witness;
  std::optional<Rational> witness_slope;
  /// Present when epsilon > 0.
  std::optional<bool> uniform;
};

/// Slope classification of (alpha, beta) relative to the supplied subvariety
/// list. alpha must pass kahler_test; beta must be nef with alpha^{n-1}.beta > 0.
Verdict j_verdict(const GeometryModel& geometry, const ClassVector& alpha, const ClassVector& beta,
                  const Rational& epsilon = Rational(0));

struct CsckEntry {
  std::string name;
  int m = 1;
  std::optional<Rational> lhs;
  Rational rhs;
  bool kahler_violation = false;
};

struct CsckVerdict {
  bool passes = false;
  Rational epsilon;
  /// gamma^{n-1}.K_X / gamma^n.
  Rational ratio;
  std::vector<CsckEntry> per_z;
  std::optional<std::string> witness;
  /// epsilon < (n+1)/n * alpha_invariant, when the invariant is supplied.
  std::optional<bool> alpha_gate;
};

CsckVerdict csck_slope_test(const GeometryModel& geometry, const ClassVector& gamma,
                            const Rational& epsilon,
                            const std::optional<Rational>& alpha_invariant = std::nullopt);

struct CsckSweep {
  /// Largest tested t for which K_X + t gamma is Kahler and passes, if any.
  std::optional<Rational> largest_passing;
  /// Smallest tested t above largest_passing that failed, if any.
  std::optional<Rational> smallest_failing;
  int evaluations = 0;
};

/// Bisection for the pass/fail threshold of K_X + t gamma on [t_lo, t_hi].
CsckSweep csck_sweep(const GeometryModel& geometry, const ClassVector& gamma, const Rational& t_lo,
                     const Rational& t_hi, const Rational& epsilon, int iterations);

ClassVector add(const ClassVector& a, const ClassVector& b);
ClassVector scale(const ClassVector& a, const Rational& t);

}  // namespace jlab
