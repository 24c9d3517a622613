#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bicat/ratmat.hpp"

// Concrete model: finite-dimensional algebras and bimodules over exact
// rationals. The shadow of an (R,R)-bimodule is HH0, the quotient by the
// span of commutators r.m - m.r; traces of identity 1-cells are computed
// both through the coevaluation / factor-swap / evaluation composite and
// through a direct dual-basis oracle, and must agree exactly.

namespace bicat {

struct ModelError : std::runtime_error {
  std::string code;
  ModelError(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// A finite-dimensional unital associative Q-algebra by structure
// constants: e_i e_j = sum_k c[i][j][k] e_k.
struct Algebra {
  int dim = 0;
  std::vector<std::string> basis;
  std::vector<std::vector<std::vector<Rat>>> c;
  Mat unit;  // dim x 1

  // matrix of left (right) multiplication by basis element i
  Mat lmul(int i) const;
  Mat rmul(int i) const;
  // left/right multiplication operator by an arbitrary element
  Mat lmul_by(const Mat& x) const;
  Mat rmul_by(const Mat& x) const;
  Mat mult(const Mat& x, const Mat& y) const { return lmul_by(x) * y; }

  bool operator==(const Algebra& o) const {
    return dim == o.dim && c == o.c && unit == o.unit;
  }
};

// Throws ModelError("InvalidAlgebra", ...) if associativity or the
// two-sided unit law fails.
void validate_algebra(const Algebra& a);

// The one-dimensional algebra Q.
Algebra rational_algebra();

// An (A,R)-bimodule by action matrices, one per algebra basis element.
// The optional witness certifies that M is free as a right R-module: its
// columns are generators g_t, and the induced map R^k -> M must be a
// linear isomorphism.
struct Bimodule {
  Algebra A, R;
  int dim = 0;
  std::vector<Mat> left;
  std::vector<Mat> right;
  std::optional<Mat> witness;  // dim x k

  Mat left_act(const Mat& a) const;   // action of an element of A
  Mat right_act(const Mat& r) const;  // action of an element of R
};

// Throws ModelError("InvalidBimodule", ...) if either action fails to be
// a unital homomorphism or the two actions do not commute, and
// ModelError("NotFree", ...) if a witness is present but not a basis.
void validate_bimodule(const Bimodule& m);

// A as a bimodule over (A, A).
Bimodule regular_bimodule(const Algebra& a);
// Q^n over (Q, Q), with the standard witness.
Bimodule free_rational_module(int n);
// Block sum over the same pair of algebras; witnesses concatenate.
Bimodule direct_sum(const Bimodule& m, const Bimodule& n);

// M (x)_R N with the induced outer actions, together with the quotient
// from the plain tensor product (index i * N.dim + j) used to transport
// maps in and out.
struct TensorResult {
  Bimodule prod;
  Quotient q;
};
TensorResult tensor_over(const Bimodule& m, const Bimodule& n);

// HH0(R; M) = M / span{ r.m - m.r } for M over (R, R).
struct HH0Space {
  Quotient q;
  int dim() const { return q.dim(); }
};
HH0Space shadow_hh0(const Bimodule& m);

// The dual of a free (A,R)-bimodule: DM = Hom_R(M, R) with its (R,A)
// actions, plus the coevaluation and evaluation of the resulting dual
// pair. Triangle identities are verified exactly before returning.
struct DualData {
  Bimodule DM;        // over (R, A)
  TensorResult MDM;   // M (x)_R DM over (A, A)
  TensorResult DMM;   // DM (x)_A M over (R, R)
  Mat coev;           // MDM coords x dim A
  Mat eval;           // dim R x DMM coords
  std::vector<Mat> phi;  // coordinate functionals: phi[t] : M -> R
};
DualData dualize(const Bimodule& m);

// The trace of the identity of M through the bicategorical composite:
// HH0(A;A) -> HH0(A; M(x)DM) -> swap -> HH0(R; DM(x)M) -> HH0(R;R).
Mat evaluate_trace(const Bimodule& m);

// Independent oracle: [a] -> sum_t [ phi_t(a.g_t) ] straight from the
// dual basis, bypassing the composite pipeline.
Mat hattori_stallings_oracle(const Bimodule& m);

}  // namespace bicat
