#pragma once

#include "bicat/engine.hpp"

// Derived constructions: dual pair handles, the trace composite, pair
// composition with certified triangle identities, and the shipped corpus
// of theorem scripts.

namespace bicat {

enum class PairProvenance { Declared, Composite };

struct DualPairHandle {
  OneCell X, Y;
  TC coev, eval;
  PairProvenance provenance = PairProvenance::Declared;
  // triangle identity certificates; composite pairs carry Proved scripts,
  // declared pairs hold them by axiom
  std::vector<ProofScript> certificates;
};

struct ScriptFailure : std::runtime_error {
  explicit ScriptFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Handle for a pair declared in the signature (by index).
DualPairHandle declared_pair(const Signature& sig, int index);
// The unit 1-cell is self-dual with identity structure maps.
DualPairHandle unit_pair(const std::string& zero_cell);

struct TraceExpr {
  DualPairHandle pair;
  TC phi;
  SC result;
};

// The trace of phi: P(x)X -> X(x)Q over a dual pair (X, Y): the shadow-level
// composite  sh(1_P * coev) ; sh(phi * 1_Y) ; th[X(x)Q; Y] ; sh(eval * 1_Q)
// from sh[P] to sh[Q]. Throws TypeError on boundary mismatch.
TraceExpr build_trace(const Signature& sig, const DualPairHandle& pair,
                      const TC& phi);

// (X, Y) and (X', Y') composable give (X(x)X', Y'(x)Y) with
// coev = coev ; (1 * coev' * 1) and eval = (1 * eval * 1) ; eval'.
// Both triangle identities are proved by bounded search and the scripts
// verified before the handle is returned; ScriptFailure otherwise.
DualPairHandle compose_dual_pairs(const Signature& sig,
                                  const DualPairHandle& p1,
                                  const DualPairHandle& p2);

struct Theorem {
  std::string name;
  Signature sig;
  ProofScript script;  // goal in lhs/rhs, proof in steps
};

// The shipped theorem corpus; every script verifies against its signature.
std::vector<Theorem> shipped_theorems();

// Signatures the corpus items live in (also used by tests and the CLI).
Signature theta_squared_sig();
Signature transfer_sig();      // 0-cells b, e; Sf, fS, DSf; two dual pairs
Signature functoriality_sig(); // 0-cells A, B, C; two composable pairs

}  // namespace bicat
