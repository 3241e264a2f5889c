// optics.hpp
// Exact models of the optical elements used by the fusion gates.

#pragma once

#include <string_view>

#include "wfusion/qcore.hpp"

namespace wfusion {

enum class DetectorArm { D1, D2 };
enum class DiagonalOutcome { D, Dbar };
enum class InputPort { Mode1, Mode2 };

std::string_view to_string(DetectorArm arm);
std::string_view to_string(DiagonalOutcome o);

/// Half-wave plate rotating polarization by pi/2: exact H <-> V exchange.
PureState apply_hwp(const PureState& state, const PhotonLabel& photon);

/// Controlled swap: the two targets are exchanged in every ket whose control
/// photon is V.
PureState apply_fredkin(const PureState& state, const PhotonLabel& control, const PhotonLabel& target1,
                        const PhotonLabel& target2);

/// Polarizing beamsplitter routing seen from the gate input ports.
/// H is transmitted and V reflected, so Mode1 H and Mode2 V share arm D1.
constexpr DetectorArm route_pbs(InputPort port, Polarization pol) {
    const bool transmitted = pol == Polarization::H;
    if (port == InputPort::Mode1) return transmitted ? DetectorArm::D1 : DetectorArm::D2;
    return transmitted ? DetectorArm::D2 : DetectorArm::D1;
}

struct Projection {
    PureState residual;  // unnormalized, measured photon removed
    double weight = 0.0;  // squared norm of the residual
};

/// Applies <D| or <Dbar| to one photon and removes it from the register.
Projection project_diagonal(const PureState& state, const PhotonLabel& photon, DiagonalOutcome outcome);

}  // namespace wfusion
