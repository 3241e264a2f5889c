// qcore.hpp
// Sparse pure states over a register of labeled polarization qubits.
//
// Every photon carries a label (site, index). Registers are always kept in
// canonical order: AliceKept ascending, Mode1, BobKept ascending, Mode2,
// Ancilla. Basis kets are bitmasks over register positions (bit set = V).

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wfusion {

using Complex = std::complex<double>;

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;

/// Tolerance used when checking that a 2x2 matrix is unitary.
inline constexpr double kUnitaryTolerance = 1e-12;

/// Registers are limited by the width of the ket bitmask.
inline constexpr std::size_t kMaxPhotons = 64;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char to_char(Polarization p);

// Declaration order is the canonical register order.
enum class Site : std::uint8_t { AliceKept = 0, Mode1 = 1, BobKept = 2, Mode2 = 3, Ancilla = 4 };

std::string_view to_string(Site s);

struct PhotonLabel {
    Site site = Site::AliceKept;
    std::uint32_t index = 0;

    friend auto operator<=>(const PhotonLabel&, const PhotonLabel&) = default;
};

std::string to_string(const PhotonLabel& label);

/// Ordered, duplicate-free set of photon labels.
class PhotonRegister {
public:
    PhotonRegister() = default;

    /// Sorts the labels into canonical order. Throws std::invalid_argument on
    /// duplicates or when more than kMaxPhotons labels are given.
    explicit PhotonRegister(std::vector<PhotonLabel> labels);

    /// n labels (site, 0) ... (site, n-1).
    static PhotonRegister of_site(Site site, std::size_t n);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const std::vector<PhotonLabel>& labels() const { return labels_; }
    const PhotonLabel& operator[](std::size_t pos) const { return labels_[pos]; }

    bool contains(const PhotonLabel& label) const;

    /// Position of a label in the register; throws std::invalid_argument when
    /// the label is absent.
    std::size_t position(const PhotonLabel& label) const;

    PhotonRegister without(const PhotonLabel& label) const;

    /// Labels having the given site, in register order.
    std::vector<PhotonLabel> at_site(Site site) const;

    std::string to_string() const;

    friend bool operator==(const PhotonRegister&, const PhotonRegister&) = default;

private:
    std::vector<PhotonLabel> labels_;
};

/// Computational basis ket: one polarization per register position.
class BasisKet {
public:
    BasisKet() = default;
    BasisKet(std::uint64_t bits, std::size_t size);

    /// Parses a string of 'H'/'V' characters, position 0 first.
    static BasisKet from_string(std::string_view pols);

    std::size_t size() const { return size_; }
    std::uint64_t bits() const { return bits_; }
    Polarization at(std::size_t pos) const;
    std::size_t count_v() const;

    BasisKet with(std::size_t pos, Polarization p) const;
    BasisKet flipped(std::size_t pos) const;
    BasisKet without(std::size_t pos) const;

    std::string to_string() const;

    friend auto operator<=>(const BasisKet&, const BasisKet&) = default;

private:
    std::uint64_t bits_ = 0;
    std::uint8_t size_ = 0;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

namespace gates {
Matrix2 identity();
Matrix2 pauli_x();
Matrix2 pauli_z();
Matrix2 hadamard();
}  // namespace gates

bool is_unitary(const Matrix2& u, double tol = kUnitaryTolerance);

/// Sparse pure state. Values are immutable; every operation returns a new
/// state. Post-projection intermediates may be unnormalized.
class PureState {
public:
    using AmplitudeMap = std::map<BasisKet, Complex>;

    /// The zero-photon state with amplitude 1.
    PureState();

    /// Takes amplitudes keyed by kets in the given register's order. Kets of
    /// the wrong length are rejected; tiny amplitudes are pruned.
    PureState(PhotonRegister reg, AmplitudeMap amplitudes);

    static PureState basis(PhotonRegister reg, std::string_view pols);

    const PhotonRegister& photons() const { return register_; }
    const AmplitudeMap& amplitudes() const { return amplitudes_; }
    std::size_t num_photons() const { return register_.size(); }
    std::size_t num_terms() const { return amplitudes_.size(); }

    Complex amplitude(const BasisKet& ket) const;
    Complex amplitude(std::string_view pols) const;

    double norm_squared() const;

    /// Throws std::invalid_argument for a zero state.
    PureState normalized() const;

    PureState scaled(Complex factor) const;

    /// Keeps only the kets satisfying the predicate (an unnormalized projection).
    PureState filtered(const std::function<bool(const BasisKet&)>& keep) const;

    /// Sum of two states over the same register.
    friend PureState operator+(const PureState& a, const PureState& b);

    std::string to_string() const;

private:
    PhotonRegister register_;
    AmplitudeMap amplitudes_;
};

/// Equal superposition of all one-V kets over the register, amplitudes
/// 1/sqrt(n), real and positive. Throws std::invalid_argument on an empty register.
PureState make_w_state(const PhotonRegister& reg);

/// W state on labels (site, 0) ... (site, n-1).
PureState make_w_state(std::size_t n, Site site);

/// All-H product state over the register.
PureState make_all_h(const PhotonRegister& reg);

/// Product state on the union register, reordered canonically.
PureState tensor(const PureState& a, const PureState& b);

/// <a|b> by register position. Registers must have equal size.
Complex inner_product(const PureState& a, const PureState& b);

/// |<a|b>|^2, assuming both states are normalized.
double fidelity(const PureState& a, const PureState& b);

/// Largest amplitude difference over the union of supports.
double max_amplitude_distance(const PureState& a, const PureState& b);

PureState apply_single_qubit(const PureState& state, const PhotonLabel& photon, const Matrix2& u);

/// Exchanges the polarizations of two photons in every ket.
PureState swap_photons(const PureState& state, const PhotonLabel& a, const PhotonLabel& b);

/// Checks |W_n> = (|(n-1)_H>|V> + sqrt(n-1)|W_{n-1}>|H>)/sqrt(n), with the
/// last photon in the role of the gate mode.
bool w_recursion_check(std::size_t n);

}  // namespace wfusion
