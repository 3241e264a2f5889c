// fusion.hpp
// The W-state fusion gate (FG) and its Fredkin-enhanced variant (FGF).
//
// Alice holds |W_n> with n-1 kept photons and one photon in gate mode 1; Bob
// holds |W_m> with m-1 kept photons and one in gate mode 2. FGF adds an
// H-polarized ancilla that the Fredkin gate may swap into the output.
//
// Every detection branch (arm occupancy x D/Dbar result of each detected
// photon) is enumerated exactly. Nothing is sampled here.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfusion/optics.hpp"
#include "wfusion/qcore.hpp"
#include "wfusion/rational.hpp"

namespace wfusion {

enum class GateKind { FG, FGF };
enum class BranchClass { Success, Recycle, Failure };

std::string_view to_string(GateKind g);
std::string_view to_string(BranchClass c);

/// Parses "fg" / "fgf" (case-insensitive). Throws std::invalid_argument.
GateKind parse_gate(std::string_view text);

inline constexpr PhotonLabel kMode1Photon{Site::Mode1, 0};
inline constexpr PhotonLabel kMode2Photon{Site::Mode2, 0};
inline constexpr PhotonLabel kAncillaPhoton{Site::Ancilla, 0};

/// Largest W size accepted by the simulators (register width bound).
inline constexpr int kMaxFusionInput = 31;

struct ArmOccupancy {
    int d1 = 0;
    int d2 = 0;
    friend bool operator==(const ArmOccupancy&, const ArmOccupancy&) = default;
};

struct DiagonalResult {
    PhotonLabel photon;
    DiagonalOutcome outcome = DiagonalOutcome::D;
};

struct DetectionOutcome {
    ArmOccupancy occupancy;
    std::vector<DiagonalResult> diag_results;  // Mode1 photon first, then Mode2
    double probability = 0.0;
    Rational exact_probability{0};
    PureState post_state;  // normalized; no terms when the branch is impossible
    BranchClass cls = BranchClass::Failure;
    bool correction_applied = false;
    /// Fidelity of the (corrected) post-state to the branch's expected state:
    /// the fused W state, the two shrunken W states, or all-H after failure.
    std::optional<double> fidelity;
};

struct FusionReport {
    int n = 0;
    int m = 0;
    GateKind gate = GateKind::FG;
    std::vector<DetectionOutcome> branches;
    double p_success = 0.0;
    double p_recycle = 0.0;
    double p_failure = 0.0;
    Rational exact_success{0};
    Rational exact_recycle{0};
    Rational exact_failure{0};
    double success_fidelity = 0.0;  // minimum over success branches
    double recycle_fidelity = 0.0;  // minimum over recycle branches
    int fused_size = 0;
};

int fused_size(int n, int m, GateKind gate);

/// Occupancy class of the two detected photons: coincidence is success,
/// bunching at D1 is recycle, bunching at D2 is failure.
BranchClass classify(const ArmOccupancy& occ);

/// The initial state |W_n>_A (x) |W_m>_B, plus |H>_ancilla for FGF.
PureState fusion_input_state(int n, int m, GateKind gate);

/// Expected states used to verify branches.
PureState fused_target(int n, int m, GateKind gate);
PureState recycle_target(int n, int m, GateKind gate);

FusionReport fuse(int n, int m, GateKind gate);
inline FusionReport fuse_fg(int n, int m) { return fuse(n, m, GateKind::FG); }
inline FusionReport fuse_fgf(int n, int m) { return fuse(n, m, GateKind::FGF); }

/// Phase correction is needed iff the two coincidence photons gave different
/// D/Dbar results. Indexed [mode1 outcome][mode2 outcome], D = 0, Dbar = 1.
/// Frozen from the fidelity oracle in the fusion tests.
inline constexpr std::array<std::array<bool, 2>, 2> kCorrectionTable{{{false, true}, {true, false}}};

/// Z on every Bob-kept photon and, for FGF, the ancilla. Unconditional.
PureState apply_correction(const PureState& state, GateKind gate);

/// Applies the outcome-dependent correction to a success branch's post-state.
/// Throws std::invalid_argument for any other branch class.
PureState feed_forward_correct(const DetectionOutcome& branch, GateKind gate);

struct InputCase {
    std::string pattern;  // polarizations of the Mode1 and Mode2 photons, e.g. "HV"
    Rational probability;
    BranchClass cls;
};

/// The four input polarization patterns of the gate photons, their exact
/// probabilities and the class the optics assign them.
std::vector<InputCase> enumerate_input_cases(int n, int m, GateKind gate);

// ---------- exact rational path ----------

struct ExactBranch {
    ArmOccupancy occupancy;
    std::array<DiagonalOutcome, 2> outcomes{};
    Rational probability{0};
    BranchClass cls = BranchClass::Failure;
};

struct ExactReport {
    std::vector<ExactBranch> branches;  // same order as FusionReport::branches
    Rational success{0};
    Rational recycle{0};
    Rational failure{0};
};

/// Independent bitmask simulation with integer amplitudes and a rational
/// squared scale, so every probability comes out exact.
ExactReport fuse_exact(int n, int m, GateKind gate);

}  // namespace wfusion
