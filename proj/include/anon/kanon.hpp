#pragma once

#include "anon/emd.hpp"
#include "anon/rational.hpp"
#include "anon/table.hpp"
#include "anon/tclose.hpp"

namespace anon {

struct KAnonInstance {
  Table table;
  long long k = 1;
};

// Which branch of the m-approximation applies to an instance. AllLarge is
// the trivial branch (every QI class already has size >= k); the other three
// are the proof's Case 1/2/3.
enum class KAnonApproxCase { AllLarge, MergeSmall, CarveOut, MergeNext };

KAnonApproxCase classify_kanon_case(const Table& table, long long k);

// m-approximation. Output is always k-anonymous; cost <= m * OPT.
SolveResult approx_k_anonymity(const KAnonInstance& inst);

// Independent oracle: cheapest partition with every group of size >= k,
// found by restricted-growth-string enumeration with pruning.
SolveResult brute_force_k_anonymity(const KAnonInstance& inst,
                                    const TcloseOptions& opts = {});

struct TcloseInstance {
  Table table;
  Rational t;
  SaSpace space;
};

// SA values relabeled to distinct 1..n, equal-distance space, t = (n-k)/n.
// A group of the emitted instance is t-close iff it has size >= k.
TcloseInstance reduce_kanon_to_tclose(const KAnonInstance& inst);

// Exact optimum via the reduction and the recursive t-closeness solver. The
// returned partition is valid for the original table (relabeling SAs never
// affects QI suppression).
SolveResult exact_k_anonymity(const KAnonInstance& inst,
                              const TcloseOptions& opts = {});

}  // namespace anon
