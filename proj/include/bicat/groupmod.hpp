#pragma once

#include <string>
#include <vector>

#include "bicat/bimod.hpp"

// Finite covering spaces at the level of H0: the free loop transfer of a
// cover BK -> BG is an integer matrix from conjugacy classes of G to
// conjugacy classes of K, computed by the coset-conjugation formula and
// cross-checked against the bimodule-model trace of QG over (QG, QK).

namespace bicat {

struct FiniteGroup {
  int order = 0;
  int identity = 0;
  std::vector<std::vector<int>> table;  // table[i][j] = i * j
  std::vector<std::string> labels;

  int mul(int i, int j) const { return table[i][j]; }
  int inv(int i) const;
};

// Validates the table as a group (associativity exhaustively for orders up
// to `assoc_bound`); throws ModelError("InvalidGroup", ...).
FiniteGroup group_from_table(std::vector<std::vector<int>> table,
                             int assoc_bound = 300);

// Builds a group from permutation generators on {0..degree-1}, each given
// as a list of cycles. Closure by orbit enumeration, bounded by
// `order_bound`; elements are labeled in cycle notation.
FiniteGroup group_from_permutations(
    int degree, const std::vector<std::vector<std::vector<int>>>& generators,
    int order_bound = 2000);

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

struct ConjClass {
  int rep = 0;  // least element index in the class
  std::vector<int> elements;
};

// Classes sorted by least representative; the identity class comes first.
std::vector<ConjClass> conjugacy_classes(const FiniteGroup& g);

struct CoverSpec {
  FiniteGroup G;
  std::vector<int> K;              // subgroup element indices, ascending
  std::vector<int> coset_reps;     // x_1..x_n, lexicographic-least, G = ∪ x_i K
  std::vector<ConjClass> gclasses;
  std::vector<ConjClass> kclasses;  // conjugacy in K, element indices in G
};

// Throws ModelError("NotASubgroup", ...) naming the offending element.
CoverSpec build_cover(const FiniteGroup& g, std::vector<int> subgroup);

struct TransferMatrix {
  std::vector<std::string> row_labels;  // classes of K
  std::vector<std::string> col_labels;  // classes of G
  std::vector<int> row_sizes, col_sizes;
  std::vector<std::vector<long long>> entries;  // rows x cols
};

// entry(λ, ω) = #{ i : x_i^{-1} g x_i ∈ K and lies in class λ } for the
// canonical representative g of ω.
TransferMatrix loop_transfer(const CoverSpec& cover);

// H0 degree of the full transfer round trip on the identity component:
// the column sum of the identity class. Equals [G:K].
long long becker_gottlieb_composite(const CoverSpec& cover);

// loop_transfer composed with class inclusion [k]_K -> [k]_G; for abelian
// G this is [G:K] times the identity.
std::vector<std::vector<long long>> euler_composite(const CoverSpec& cover);

// Closure of a generating set under multiplication and inverses,
// returned ascending; always contains the identity.
std::vector<int> generated_subgroup(const FiniteGroup& g,
                                    const std::vector<int>& gens);

// A subgroup repackaged as a group in its own right. Element i of the
// result is elems[i] (ascending), so orderings agree with the ambient
// enumeration. Throws ModelError("NotASubgroup", ...).
FiniteGroup subgroup_as_group(const FiniteGroup& g, std::vector<int> elems);

// QG as an algebra over the rationals.
Algebra group_algebra(const FiniteGroup& g);

// QK for a subgroup, with basis indexed by position in the (ascending)
// subgroup enumeration.
Algebra subgroup_algebra(const FiniteGroup& g, const std::vector<int>& k);

// QG as a bimodule over (QG, QK), with the cover's coset representatives
// as freeness witness.
Bimodule cover_bimodule(const CoverSpec& cover);

struct CrossModelReport {
  bool pass = false;
  TransferMatrix transfer;
  Mat bimod_trace;  // in conjugacy-class bases, rows classes(K)
  std::string message;
};

// Builds M = QG over (QG, QK) with the coset representatives as freeness
// witness, evaluates the bicategorical trace at HH0, rewrites both HH0
// bases in conjugacy-class order, and compares with loop_transfer.
CrossModelReport cross_model_check(const CoverSpec& cover);

// Aligned text rendering of a transfer matrix.
std::string render_table(const TransferMatrix& t);

}  // namespace bicat
