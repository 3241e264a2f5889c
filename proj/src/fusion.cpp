#include "wfusion/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace wfusion {

std::string_view to_string(GateKind g) { return g == GateKind::FG ? "fg" : "fgf"; }

std::string_view to_string(BranchClass c) {
    switch (c) {
        case BranchClass::Success: return "Success";
        case BranchClass::Recycle: return "Recycle";
        case BranchClass::Failure: return "Failure";
    }
    return "?";
}

GateKind parse_gate(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "fg") return GateKind::FG;
    if (lower == "fgf" || lower == "fg&f") return GateKind::FGF;
    throw std::invalid_argument("unknown gate '" + std::string(text) + "' (expected fg or fgf)");
}

namespace {

void check_sizes(int n, int m) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("W state sizes must be at least 2 (minimum size 2), got n=" + std::to_string(n) +
                                    ", m=" + std::to_string(m));
    }
    if (n > kMaxFusionInput || m > kMaxFusionInput) {
        throw std::invalid_argument("W state sizes above " + std::to_string(kMaxFusionInput) +
                                    " exceed the simulator register");
    }
}

PhotonRegister party_register(Site kept, std::size_t kept_count, const PhotonLabel& gate_photon) {
    std::vector<PhotonLabel> labels = PhotonRegister::of_site(kept, kept_count).labels();
    labels.push_back(gate_photon);
    return PhotonRegister(std::move(labels));
}

PhotonRegister kept_register(int n, int m, GateKind gate) {
    std::vector<PhotonLabel> labels = PhotonRegister::of_site(Site::AliceKept, static_cast<std::size_t>(n - 1)).labels();
    const auto bob = PhotonRegister::of_site(Site::BobKept, static_cast<std::size_t>(m - 1)).labels();
    labels.insert(labels.end(), bob.begin(), bob.end());
    if (gate == GateKind::FGF) labels.push_back(kAncillaPhoton);
    return PhotonRegister(std::move(labels));
}

constexpr std::array<ArmOccupancy, 3> kOccupancies{{{2, 0}, {1, 1}, {0, 2}}};
constexpr std::array<DiagonalOutcome, 2> kOutcomes{DiagonalOutcome::D, DiagonalOutcome::Dbar};

}  // namespace

int fused_size(int n, int m, GateKind gate) { return gate == GateKind::FG ? n + m - 2 : n + m - 1; }

BranchClass classify(const ArmOccupancy& occ) {
    if (occ.d1 == 1 && occ.d2 == 1) return BranchClass::Success;
    if (occ.d1 == 2) return BranchClass::Recycle;
    return BranchClass::Failure;
}

PureState fusion_input_state(int n, int m, GateKind gate) {
    check_sizes(n, m);
    const auto alice = make_w_state(party_register(Site::AliceKept, static_cast<std::size_t>(n - 1), kMode1Photon));
    const auto bob = make_w_state(party_register(Site::BobKept, static_cast<std::size_t>(m - 1), kMode2Photon));
    auto state = tensor(alice, bob);
    if (gate == GateKind::FGF) state = tensor(state, PureState::basis(PhotonRegister({kAncillaPhoton}), "H"));
    return state;
}

PureState fused_target(int n, int m, GateKind gate) {
    check_sizes(n, m);
    return make_w_state(kept_register(n, m, gate));
}

PureState recycle_target(int n, int m, GateKind gate) {
    check_sizes(n, m);
    auto state = tensor(make_w_state(static_cast<std::size_t>(n - 1), Site::AliceKept),
                        make_w_state(static_cast<std::size_t>(m - 1), Site::BobKept));
    if (gate == GateKind::FGF) state = tensor(state, PureState::basis(PhotonRegister({kAncillaPhoton}), "H"));
    return state;
}

PureState apply_correction(const PureState& state, GateKind gate) {
    PureState out = state;
    for (const auto& label : state.photons().at_site(Site::BobKept)) {
        out = apply_single_qubit(out, label, gates::pauli_z());
    }
    if (gate == GateKind::FGF) out = apply_single_qubit(out, kAncillaPhoton, gates::pauli_z());
    return out;
}

PureState feed_forward_correct(const DetectionOutcome& branch, GateKind gate) {
    if (branch.cls != BranchClass::Success) {
        throw std::invalid_argument("feed-forward correction applies to success branches only, got " +
                                    std::string(to_string(branch.cls)));
    }
    if (branch.diag_results.size() != 2) throw std::invalid_argument("success branch must record two detections");
    const auto idx = [](DiagonalOutcome o) { return o == DiagonalOutcome::D ? 0 : 1; };
    const bool flip = kCorrectionTable[idx(branch.diag_results[0].outcome)][idx(branch.diag_results[1].outcome)];
    return flip ? apply_correction(branch.post_state, gate) : branch.post_state;
}

std::vector<InputCase> enumerate_input_cases(int n, int m, GateKind gate) {
    check_sizes(n, m);
    const std::int64_t nn = n;
    const std::int64_t mm = m;
    // P(mode photon is V) = 1/size for a W state.
    const std::array<std::pair<std::string, Rational>, 4> rows{{
        {"HH", Rational((nn - 1) * (mm - 1), nn * mm)},
        {"HV", Rational(nn - 1, nn * mm)},
        {"VH", Rational(mm - 1, nn * mm)},
        {"VV", Rational(1, nn * mm)},
    }};

    std::vector<InputCase> out;
    for (const auto& [pattern, prob] : rows) {
        // Push the basis pattern through the optics and read off where it lands.
        std::vector<PhotonLabel> labels{kMode1Photon, kMode2Photon};
        std::string pols = pattern;
        if (gate == GateKind::FGF) {
            labels.push_back(kAncillaPhoton);
            pols += 'H';
        }
        auto state = PureState::basis(PhotonRegister(labels), pols);
        if (gate == GateKind::FGF) state = apply_fredkin(state, kMode1Photon, kMode2Photon, kAncillaPhoton);
        state = apply_hwp(state, kMode2Photon);
        const BasisKet ket = state.amplitudes().begin()->first;
        ArmOccupancy occ;
        const auto count = [&occ](DetectorArm arm) { (arm == DetectorArm::D1 ? occ.d1 : occ.d2) += 1; };
        count(route_pbs(InputPort::Mode1, ket.at(state.photons().position(kMode1Photon))));
        count(route_pbs(InputPort::Mode2, ket.at(state.photons().position(kMode2Photon))));
        out.push_back({pattern, prob, classify(occ)});
    }
    return out;
}

FusionReport fuse(int n, int m, GateKind gate) {
    check_sizes(n, m);
    FusionReport report;
    report.n = n;
    report.m = m;
    report.gate = gate;
    report.fused_size = fused_size(n, m, gate);

    PureState state = fusion_input_state(n, m, gate);
    if (gate == GateKind::FGF) state = apply_fredkin(state, kMode1Photon, kMode2Photon, kAncillaPhoton);
    state = apply_hwp(state, kMode2Photon);

    const std::size_t pos1 = state.photons().position(kMode1Photon);
    const std::size_t pos2 = state.photons().position(kMode2Photon);
    const auto occupancy_of = [&](const BasisKet& ket) {
        ArmOccupancy occ;
        for (auto arm : {route_pbs(InputPort::Mode1, ket.at(pos1)), route_pbs(InputPort::Mode2, ket.at(pos2))}) {
            (arm == DetectorArm::D1 ? occ.d1 : occ.d2) += 1;
        }
        return occ;
    };

    const PureState success_target = fused_target(n, m, gate);
    const PureState recycled = recycle_target(n, m, gate);
    const PureState failed = make_all_h(kept_register(n, m, gate));
    const ExactReport exact = fuse_exact(n, m, gate);

    report.success_fidelity = 1.0;
    report.recycle_fidelity = 1.0;
    std::size_t branch_index = 0;
    for (const auto& occ : kOccupancies) {
        const PureState routed = state.filtered([&](const BasisKet& ket) { return occupancy_of(ket) == occ; });
        for (auto o1 : kOutcomes) {
            for (auto o2 : kOutcomes) {
                DetectionOutcome b;
                b.occupancy = occ;
                b.cls = classify(occ);
                b.diag_results = {{kMode1Photon, o1}, {kMode2Photon, o2}};
                const auto first = project_diagonal(routed, kMode1Photon, o1);
                const auto second = project_diagonal(first.residual, kMode2Photon, o2);
                b.probability = second.weight;

                const ExactBranch& eb = exact.branches.at(branch_index++);
                if (!(eb.occupancy == occ) || eb.outcomes[0] != o1 || eb.outcomes[1] != o2) {
                    throw std::logic_error("exact and floating-point branch enumerations disagree on order");
                }
                b.exact_probability = eb.probability;

                if (second.weight > kPruneThreshold) {
                    b.post_state = second.residual.normalized();
                    switch (b.cls) {
                        case BranchClass::Success: {
                            const auto corrected = feed_forward_correct(b, gate);
                            b.correction_applied = kCorrectionTable[o1 == DiagonalOutcome::Dbar][o2 == DiagonalOutcome::Dbar];
                            b.fidelity = fidelity(corrected, success_target);
                            report.success_fidelity = std::min(report.success_fidelity, *b.fidelity);
                            break;
                        }
                        case BranchClass::Recycle:
                            b.fidelity = fidelity(b.post_state, recycled);
                            report.recycle_fidelity = std::min(report.recycle_fidelity, *b.fidelity);
                            break;
                        case BranchClass::Failure:
                            b.fidelity = fidelity(b.post_state, failed);
                            break;
                    }
                } else {
                    b.post_state = PureState(second.residual.photons(), {});
                }

                switch (b.cls) {
                    case BranchClass::Success: report.p_success += b.probability; break;
                    case BranchClass::Recycle: report.p_recycle += b.probability; break;
                    case BranchClass::Failure: report.p_failure += b.probability; break;
                }
                report.branches.push_back(std::move(b));
            }
        }
    }
    report.exact_success = exact.success;
    report.exact_recycle = exact.recycle;
    report.exact_failure = exact.failure;
    return report;
}

}  // namespace wfusion
