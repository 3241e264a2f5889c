// Exact branch probabilities for FG / FGF.
//
// Every ket of |W_n>|W_m>(|H>) has the same amplitude 1/sqrt(nm), the
// Fredkin gate and the HWP only permute kets, and each D/Dbar projection
// contributes a factor +-1/sqrt2. Amplitudes therefore stay of the form
// integer * sqrt(scale2) with a rational scale2, and every branch weight is
// scale2 * sum(coefficient^2), an exact rational.

#include <map>
#include <stdexcept>
#include <tuple>

#include "wfusion/fusion.hpp"

namespace wfusion {

namespace {

struct Term {
    std::uint64_t alice = 0;  // bit i: Alice's photon i is V; bit n-1 is the gate photon
    std::uint64_t bob = 0;    // bit j: Bob's photon j is V; bit m-1 is the gate photon
    bool ancilla_v = false;
};

Polarization pol(std::uint64_t bits, int pos) {
    return ((bits >> pos) & 1U) ? Polarization::V : Polarization::H;
}

}  // namespace

ExactReport fuse_exact(int n, int m, GateKind gate) {
    if (n < 2 || m < 2) throw std::invalid_argument("W state sizes must be at least 2 (minimum size 2)");
    if (n > kMaxFusionInput || m > kMaxFusionInput) throw std::invalid_argument("W state size too large");

    const int g1 = n - 1;  // Alice's gate photon bit
    const int g2 = m - 1;  // Bob's gate photon bit

    std::vector<Term> terms;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            terms.push_back({std::uint64_t{1} << i, std::uint64_t{1} << j, false});
        }
    }
    // Each term carries amplitude 1/sqrt(nm); the projections add a factor 1/4
    // to the squared scale.
    const Rational scale2(1, 4 * static_cast<std::int64_t>(n) * m);

    for (auto& t : terms) {
        if (gate == GateKind::FGF && pol(t.alice, g1) == Polarization::V) {
            const bool bob_gate_v = pol(t.bob, g2) == Polarization::V;
            t.bob = (t.bob & ~(std::uint64_t{1} << g2)) | (std::uint64_t{t.ancilla_v} << g2);
            t.ancilla_v = bob_gate_v;
        }
        t.bob ^= std::uint64_t{1} << g2;  // HWP on mode 2
    }

    ExactReport report;
    const std::array<ArmOccupancy, 3> occupancies{{{2, 0}, {1, 1}, {0, 2}}};
    const std::array<DiagonalOutcome, 2> outcomes{DiagonalOutcome::D, DiagonalOutcome::Dbar};
    for (const auto& occ : occupancies) {
        for (auto o1 : outcomes) {
            for (auto o2 : outcomes) {
                using Key = std::tuple<std::uint64_t, std::uint64_t, bool>;
                std::map<Key, std::int64_t> coeff;
                for (const auto& t : terms) {
                    const Polarization p1 = pol(t.alice, g1);
                    const Polarization p2 = pol(t.bob, g2);
                    ArmOccupancy here;
                    for (auto arm : {route_pbs(InputPort::Mode1, p1), route_pbs(InputPort::Mode2, p2)}) {
                        (arm == DetectorArm::D1 ? here.d1 : here.d2) += 1;
                    }
                    if (!(here == occ)) continue;
                    std::int64_t sign = 1;
                    if (p1 == Polarization::V && o1 == DiagonalOutcome::Dbar) sign = -sign;
                    if (p2 == Polarization::V && o2 == DiagonalOutcome::Dbar) sign = -sign;
                    const Key kept{t.alice & ~(std::uint64_t{1} << g1), t.bob & ~(std::uint64_t{1} << g2),
                                   t.ancilla_v};
                    coeff[kept] += sign;
                }
                std::int64_t sum_sq = 0;
                for (const auto& [k, c] : coeff) sum_sq += c * c;

                ExactBranch b;
                b.occupancy = occ;
                b.outcomes = {o1, o2};
                b.probability = scale2 * sum_sq;
                b.cls = classify(occ);
                switch (b.cls) {
                    case BranchClass::Success: report.success += b.probability; break;
                    case BranchClass::Recycle: report.recycle += b.probability; break;
                    case BranchClass::Failure: report.failure += b.probability; break;
                }
                report.branches.push_back(b);
            }
        }
    }
    return report;
}

}  // namespace wfusion
