#include "wfusion/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace wfusion {

std::string_view to_string(DetectorArm arm) { return arm == DetectorArm::D1 ? "D1" : "D2"; }

std::string_view to_string(DiagonalOutcome o) { return o == DiagonalOutcome::D ? "D" : "Dbar"; }

PureState apply_hwp(const PureState& state, const PhotonLabel& photon) {
    const std::size_t pos = state.photons().position(photon);
    PureState::AmplitudeMap out;
    for (const auto& [ket, amp] : state.amplitudes()) out.emplace(ket.flipped(pos), amp);
    return PureState(state.photons(), std::move(out));
}

PureState apply_fredkin(const PureState& state, const PhotonLabel& control, const PhotonLabel& target1,
                        const PhotonLabel& target2) {
    if (control == target1 || control == target2 || target1 == target2) {
        throw std::invalid_argument("Fredkin gate needs three distinct photons");
    }
    const std::size_t c = state.photons().position(control);
    const std::size_t t1 = state.photons().position(target1);
    const std::size_t t2 = state.photons().position(target2);

    PureState::AmplitudeMap out;
    for (const auto& [ket, amp] : state.amplitudes()) {
        if (ket.at(c) == Polarization::V) {
            out.emplace(ket.with(t1, ket.at(t2)).with(t2, ket.at(t1)), amp);
        } else {
            out.emplace(ket, amp);
        }
    }
    return PureState(state.photons(), std::move(out));
}

Projection project_diagonal(const PureState& state, const PhotonLabel& photon, DiagonalOutcome outcome) {
    const std::size_t pos = state.photons().position(photon);
    const double r = 1.0 / std::sqrt(2.0);
    // <D|H> = <D|V> = <Dbar|H> = 1/sqrt2, <Dbar|V> = -1/sqrt2
    const double v_coeff = outcome == DiagonalOutcome::D ? r : -r;

    PureState::AmplitudeMap out;
    for (const auto& [ket, amp] : state.amplitudes()) {
        const double c = ket.at(pos) == Polarization::V ? v_coeff : r;
        out[ket.without(pos)] += c * amp;
    }
    PureState residual(state.photons().without(photon), std::move(out));
    const double weight = residual.norm_squared();
    return {std::move(residual), weight};
}

}  // namespace wfusion
