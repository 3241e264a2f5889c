#include "wfusion/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wfusion {

char to_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }

std::string_view to_string(Site s) {
    switch (s) {
        case Site::AliceKept: return "alice";
        case Site::Mode1: return "mode1";
        case Site::BobKept: return "bob";
        case Site::Mode2: return "mode2";
        case Site::Ancilla: return "ancilla";
    }
    return "?";
}

std::string to_string(const PhotonLabel& label) {
    return std::string(to_string(label.site)) + "[" + std::to_string(label.index) + "]";
}

// ---------- PhotonRegister ----------

PhotonRegister::PhotonRegister(std::vector<PhotonLabel> labels) : labels_(std::move(labels)) {
    if (labels_.size() > kMaxPhotons) {
        throw std::invalid_argument("register exceeds " + std::to_string(kMaxPhotons) + " photons");
    }
    std::sort(labels_.begin(), labels_.end());
    if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
        throw std::invalid_argument("duplicate photon label in register");
    }
}

PhotonRegister PhotonRegister::of_site(Site site, std::size_t n) {
    std::vector<PhotonLabel> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back({site, static_cast<std::uint32_t>(i)});
    }
    return PhotonRegister(std::move(labels));
}

bool PhotonRegister::contains(const PhotonLabel& label) const {
    return std::binary_search(labels_.begin(), labels_.end(), label);
}

std::size_t PhotonRegister::position(const PhotonLabel& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) {
        throw std::invalid_argument("photon " + wfusion::to_string(label) + " is not in the register");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

PhotonRegister PhotonRegister::without(const PhotonLabel& label) const {
    auto labels = labels_;
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(position(label)));
    return PhotonRegister(std::move(labels));
}

std::vector<PhotonLabel> PhotonRegister::at_site(Site site) const {
    std::vector<PhotonLabel> out;
    for (const auto& l : labels_) {
        if (l.site == site) out.push_back(l);
    }
    return out;
}

std::string PhotonRegister::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) out += ", ";
        out += wfusion::to_string(labels_[i]);
    }
    return out + ")";
}

// ---------- BasisKet ----------

BasisKet::BasisKet(std::uint64_t bits, std::size_t size) : bits_(bits), size_(static_cast<std::uint8_t>(size)) {
    if (size > kMaxPhotons) throw std::invalid_argument("ket longer than 64 photons");
    if (size < kMaxPhotons && (bits >> size) != 0) {
        throw std::invalid_argument("ket bits exceed ket length");
    }
}

BasisKet BasisKet::from_string(std::string_view pols) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < pols.size(); ++i) {
        if (pols[i] == 'V') {
            bits |= std::uint64_t{1} << i;
        } else if (pols[i] != 'H') {
            throw std::invalid_argument("ket string may only contain H and V");
        }
    }
    return BasisKet(bits, pols.size());
}

Polarization BasisKet::at(std::size_t pos) const {
    return ((bits_ >> pos) & 1U) ? Polarization::V : Polarization::H;
}

std::size_t BasisKet::count_v() const { return static_cast<std::size_t>(std::popcount(bits_)); }

BasisKet BasisKet::with(std::size_t pos, Polarization p) const {
    const std::uint64_t mask = std::uint64_t{1} << pos;
    return BasisKet(p == Polarization::V ? (bits_ | mask) : (bits_ & ~mask), size_);
}

BasisKet BasisKet::flipped(std::size_t pos) const { return BasisKet(bits_ ^ (std::uint64_t{1} << pos), size_); }

BasisKet BasisKet::without(std::size_t pos) const {
    const std::uint64_t low = bits_ & ((std::uint64_t{1} << pos) - 1);
    const std::uint64_t high = pos + 1 >= 64 ? 0 : (bits_ >> (pos + 1)) << pos;
    return BasisKet(low | high, size_ - 1U);
}

std::string BasisKet::to_string() const {
    std::string s(size_, 'H');
    for (std::size_t i = 0; i < size_; ++i) s[i] = to_char(at(i));
    return s;
}

// ---------- gates ----------

namespace gates {
Matrix2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
Matrix2 pauli_x() { return {{{0.0, 1.0}, {1.0, 0.0}}}; }
Matrix2 pauli_z() { return {{{1.0, 0.0}, {0.0, -1.0}}}; }
Matrix2 hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{{r, r}, {r, -r}}};
}
}  // namespace gates

bool is_unitary(const Matrix2& u, double tol) {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex s = std::conj(u[0][i]) * u[0][j] + std::conj(u[1][i]) * u[1][j];
            if (std::abs(s - Complex(i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

// ---------- PureState ----------

namespace {

void prune(PureState::AmplitudeMap& amps) {
    std::erase_if(amps, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

}  // namespace

PureState::PureState() : amplitudes_{{BasisKet(0, 0), Complex(1.0)}} {}

PureState::PureState(PhotonRegister reg, AmplitudeMap amplitudes)
    : register_(std::move(reg)), amplitudes_(std::move(amplitudes)) {
    for (const auto& [ket, amp] : amplitudes_) {
        if (ket.size() != register_.size()) {
            throw std::invalid_argument("ket length does not match register size");
        }
    }
    prune(amplitudes_);
}

PureState PureState::basis(PhotonRegister reg, std::string_view pols) {
    auto ket = BasisKet::from_string(pols);
    return PureState(std::move(reg), {{ket, Complex(1.0)}});
}

Complex PureState::amplitude(const BasisKet& ket) const {
    auto it = amplitudes_.find(ket);
    return it == amplitudes_.end() ? Complex(0.0) : it->second;
}

Complex PureState::amplitude(std::string_view pols) const { return amplitude(BasisKet::from_string(pols)); }

double PureState::norm_squared() const {
    double s = 0.0;
    for (const auto& [ket, amp] : amplitudes_) s += std::norm(amp);
    return s;
}

PureState PureState::normalized() const {
    const double n2 = norm_squared();
    if (n2 <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
    return scaled(1.0 / std::sqrt(n2));
}

PureState PureState::scaled(Complex factor) const {
    AmplitudeMap out;
    for (const auto& [ket, amp] : amplitudes_) out.emplace(ket, amp * factor);
    return PureState(register_, std::move(out));
}

PureState PureState::filtered(const std::function<bool(const BasisKet&)>& keep) const {
    AmplitudeMap out;
    for (const auto& [ket, amp] : amplitudes_) {
        if (keep(ket)) out.emplace(ket, amp);
    }
    return PureState(register_, std::move(out));
}

PureState operator+(const PureState& a, const PureState& b) {
    if (a.register_ != b.register_) throw std::invalid_argument("cannot add states over different registers");
    auto out = a.amplitudes_;
    for (const auto& [ket, amp] : b.amplitudes_) out[ket] += amp;
    return PureState(a.register_, std::move(out));
}

std::string PureState::to_string() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [ket, amp] : amplitudes_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << amp.real();
        if (amp.imag() != 0.0) os << (amp.imag() < 0 ? "-" : "+") << std::abs(amp.imag()) << "i";
        os << ")|" << ket.to_string() << ">";
    }
    if (first) os << "0";
    return os.str();
}

// ---------- free functions ----------

PureState make_w_state(const PhotonRegister& reg) {
    const std::size_t n = reg.size();
    if (n == 0) throw std::invalid_argument("W state needs at least one photon");
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    PureState::AmplitudeMap amps;
    for (std::size_t i = 0; i < n; ++i) amps.emplace(BasisKet(std::uint64_t{1} << i, n), Complex(amp));
    return PureState(reg, std::move(amps));
}

PureState make_w_state(std::size_t n, Site site) {
    if (n == 0) throw std::invalid_argument("W state size must be at least 1");
    return make_w_state(PhotonRegister::of_site(site, n));
}

PureState make_all_h(const PhotonRegister& reg) { return PureState(reg, {{BasisKet(0, reg.size()), Complex(1.0)}}); }

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<PhotonLabel> joined = a.photons().labels();
    joined.insert(joined.end(), b.photons().labels().begin(), b.photons().labels().end());
    for (const auto& l : b.photons().labels()) {
        if (a.photons().contains(l)) {
            throw std::invalid_argument("tensor of overlapping registers at " + to_string(l));
        }
    }
    PhotonRegister reg(joined);

    // Destination position of every source position (a first, then b).
    std::vector<std::size_t> dest;
    dest.reserve(joined.size());
    for (const auto& l : joined) dest.push_back(reg.position(l));

    const std::size_t na = a.num_photons();
    PureState::AmplitudeMap out;
    for (const auto& [ka, va] : a.amplitudes()) {
        for (const auto& [kb, vb] : b.amplitudes()) {
            std::uint64_t bits = 0;
            for (std::size_t i = 0; i < na; ++i) {
                if ((ka.bits() >> i) & 1U) bits |= std::uint64_t{1} << dest[i];
            }
            for (std::size_t i = 0; i < kb.size(); ++i) {
                if ((kb.bits() >> i) & 1U) bits |= std::uint64_t{1} << dest[na + i];
            }
            out.emplace(BasisKet(bits, reg.size()), va * vb);
        }
    }
    return PureState(std::move(reg), std::move(out));
}

Complex inner_product(const PureState& a, const PureState& b) {
    if (a.num_photons() != b.num_photons()) {
        throw std::invalid_argument("inner product of states with different register sizes");
    }
    Complex s(0.0);
    for (const auto& [ket, amp] : a.amplitudes()) s += std::conj(amp) * b.amplitude(ket);
    return s;
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

double max_amplitude_distance(const PureState& a, const PureState& b) {
    if (a.num_photons() != b.num_photons()) throw std::invalid_argument("register size mismatch");
    double d = 0.0;
    for (const auto& [ket, amp] : a.amplitudes()) d = std::max(d, std::abs(amp - b.amplitude(ket)));
    for (const auto& [ket, amp] : b.amplitudes()) d = std::max(d, std::abs(amp - a.amplitude(ket)));
    return d;
}

PureState apply_single_qubit(const PureState& state, const PhotonLabel& photon, const Matrix2& u) {
    const std::size_t pos = state.photons().position(photon);
    if (!is_unitary(u)) throw std::invalid_argument("single-qubit operator is not unitary");
    PureState::AmplitudeMap out;
    for (const auto& [ket, amp] : state.amplitudes()) {
        const int col = ket.at(pos) == Polarization::V ? 1 : 0;
        out[ket.with(pos, Polarization::H)] += u[0][col] * amp;
        out[ket.with(pos, Polarization::V)] += u[1][col] * amp;
    }
    return PureState(state.photons(), std::move(out));
}

PureState swap_photons(const PureState& state, const PhotonLabel& a, const PhotonLabel& b) {
    const std::size_t pa = state.photons().position(a);
    const std::size_t pb = state.photons().position(b);
    PureState::AmplitudeMap out;
    for (const auto& [ket, amp] : state.amplitudes()) {
        out.emplace(ket.with(pa, ket.at(pb)).with(pb, ket.at(pa)), amp);
    }
    return PureState(state.photons(), std::move(out));
}

bool w_recursion_check(std::size_t n) {
    if (n < 2) throw std::invalid_argument("W recursion needs n >= 2");
    const PhotonLabel gate{Site::Mode1, 0};
    const auto kept = PhotonRegister::of_site(Site::AliceKept, n - 1);
    const auto gate_reg = PhotonRegister({gate});

    std::vector<PhotonLabel> all = kept.labels();
    all.push_back(gate);
    const PureState direct = make_w_state(PhotonRegister(all));

    const PureState v_branch = tensor(make_all_h(kept), PureState::basis(gate_reg, "V"));
    const PureState h_branch = tensor(make_w_state(kept), PureState::basis(gate_reg, "H"));
    const double nd = static_cast<double>(n);
    const PureState recursive =
        (v_branch + h_branch.scaled(std::sqrt(nd - 1.0))).scaled(1.0 / std::sqrt(nd));

    return max_amplitude_distance(direct, recursive) <= 1e-12;
}

}  // namespace wfusion
