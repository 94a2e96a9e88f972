#pragma once

#include <cstdint>
#include <vector>

#include "gsos/hash.hpp"
#include "gsos/spf.hpp"

namespace gsos {

// Bounds shared by term, layer and context generation.
struct GenBounds {
  Cell cells = 2;           // var indices and assignment targets are < cells
  Value maxValue = 3;       // literals in [0, maxValue] (or [-maxValue, maxValue])
  std::size_t exprDepth = 2;
  bool negativeLiterals = false;
  Value minOffset = -2;     // br offsets
  Value maxOffset = 3;
};

// All expressions of depth <= bounds.exprDepth, smallest first. Atoms are the
// literals followed by the variables.
std::vector<Expr> enumerateExprs(const GenBounds& bounds);

// Every constant of a carrier under the bounds.
std::vector<Payload> carrierPool(Carrier c, const GenBounds& bounds);

// Payload tuples for a constructor, in lexicographic pool order.
std::vector<std::vector<Payload>> payloadTuples(const CtorSig& cs, const GenBounds& bounds);

// One-layer open terms: every constructor over variables 0..arity-1 with every
// payload tuple.
std::vector<Term> enumerateLayers(const Signature& sig, const GenBounds& bounds);

// Terms of size exactly n, with up to `vars` distinct variables allowed as
// leaves. Stops early once `cap` terms have been produced.
std::vector<Term> enumerateTermsOfSize(const Signature& sig, const GenBounds& bounds, std::size_t n,
                                       VarId vars = 0, std::size_t cap = SIZE_MAX);
// Terms of size 1..maxSize, smallest first.
std::vector<Term> enumerateTerms(const Signature& sig, const GenBounds& bounds, std::size_t maxSize,
                                 VarId vars = 0, std::size_t cap = SIZE_MAX);

// A random term of size <= maxSize. Variables 0..vars-1 may appear as leaves.
Term randomTerm(const Signature& sig, const GenBounds& bounds, std::size_t maxSize, Rng& rng, VarId vars = 0);

// Deterministic sample of single-hole contexts with at most maxLayers layers.
// The first context is always the empty one.
std::vector<Context> sampleContexts(const Signature& sig, const GenBounds& bounds, std::size_t maxLayers,
                                    std::size_t budget, std::uint64_t seed, std::size_t siblingSize = 3);

}  // namespace gsos
