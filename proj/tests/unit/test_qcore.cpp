#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "wfusion/qcore.hpp"

using namespace wfusion;

namespace {

const PhotonLabel kA0{Site::AliceKept, 0};
const PhotonLabel kA1{Site::AliceKept, 1};

PureState single(Site site, std::string_view pol) { return PureState::basis(PhotonRegister::of_site(site, 1), pol); }

}  // namespace

// ---------- register ----------

TEST(PhotonRegister, SortsIntoCanonicalOrder) {
    PhotonRegister reg({{Site::Ancilla, 0}, {Site::Mode2, 0}, {Site::BobKept, 1}, {Site::BobKept, 0},
                        {Site::Mode1, 0}, {Site::AliceKept, 1}, {Site::AliceKept, 0}});
    EXPECT_EQ(reg.to_string(), "(alice[0], alice[1], mode1[0], bob[0], bob[1], mode2[0], ancilla[0])");
    EXPECT_EQ(reg.position({Site::BobKept, 1}), 4U);
}

TEST(PhotonRegister, RejectsDuplicatesAndUnknownLabels) {
    EXPECT_THROW(PhotonRegister({kA0, kA0}), std::invalid_argument);
    EXPECT_THROW(PhotonRegister::of_site(Site::Mode1, 1).position(kA0), std::invalid_argument);
}

// ---------- make_w_state ----------

TEST(MakeWState, SinglePhotonIsV) {
    const auto w = make_w_state(1, Site::AliceKept);
    ASSERT_EQ(w.num_terms(), 1U);
    EXPECT_NEAR(std::abs(w.amplitude("V") - 1.0), 0.0, 1e-15);
}

TEST(MakeWState, BellPair) {
    const auto w = make_w_state(2, Site::AliceKept);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(w.num_terms(), 2U);
    EXPECT_NEAR(w.amplitude("HV").real(), r, 1e-15);
    EXPECT_NEAR(w.amplitude("VH").real(), r, 1e-15);
}

TEST(MakeWState, ThreePhotons) {
    const auto w = make_w_state(3, Site::AliceKept);
    const double r = 1.0 / std::sqrt(3.0);
    for (auto k : {"HHV", "HVH", "VHH"}) EXPECT_NEAR(w.amplitude(k).real(), r, 1e-15) << k;
    EXPECT_EQ(w.num_terms(), 3U);
}

TEST(MakeWState, ZeroSizeIsAnError) { EXPECT_THROW(make_w_state(0, Site::AliceKept), std::invalid_argument); }

TEST(MakeWState, PropertyOneExcitationEqualAmplitudes) {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto w = make_w_state(n, Site::BobKept);
        ASSERT_EQ(w.num_terms(), n);
        for (const auto& [ket, amp] : w.amplitudes()) {
            EXPECT_EQ(ket.count_v(), 1U);
            EXPECT_NEAR(std::abs(amp - Complex(1.0 / std::sqrt(double(n)))), 0.0, 1e-12);
        }
        EXPECT_NEAR(w.norm_squared(), 1.0, 1e-12);
    }
}

// ---------- tensor ----------

TEST(Tensor, ProductOfBasisStates) {
    const auto s = tensor(single(Site::AliceKept, "H"), single(Site::BobKept, "V"));
    EXPECT_EQ(s.num_terms(), 1U);
    EXPECT_NEAR(std::abs(s.amplitude("HV") - 1.0), 0.0, 1e-15);
}

TEST(Tensor, BellPairWithAncilla) {
    const auto s = tensor(make_w_state(2, Site::AliceKept), single(Site::Ancilla, "H"));
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(s.num_terms(), 2U);
    EXPECT_NEAR(s.amplitude("HVH").real(), r, 1e-15);
    EXPECT_NEAR(s.amplitude("VHH").real(), r, 1e-15);
}

TEST(Tensor, TwoBellPairs) {
    const auto s = tensor(make_w_state(2, Site::AliceKept), make_w_state(2, Site::BobKept));
    ASSERT_EQ(s.num_terms(), 4U);
    for (const auto& [ket, amp] : s.amplitudes()) EXPECT_NEAR(amp.real(), 0.5, 1e-15) << ket.to_string();
    for (auto k : {"HVHV", "HVVH", "VHHV", "VHVH"}) EXPECT_NEAR(s.amplitude(k).real(), 0.5, 1e-15) << k;
}

TEST(Tensor, ReordersCanonically) {
    // Bob's photon given first still lands after Alice's.
    const auto s = tensor(single(Site::BobKept, "V"), single(Site::AliceKept, "H"));
    EXPECT_EQ(s.photons()[0].site, Site::AliceKept);
    EXPECT_NEAR(std::abs(s.amplitude("HV") - 1.0), 0.0, 1e-15);
}

TEST(Tensor, OverlappingRegistersRejected) {
    EXPECT_THROW(tensor(single(Site::AliceKept, "H"), single(Site::AliceKept, "V")), std::invalid_argument);
}

TEST(Tensor, PropertyNormIsMultiplicative) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = gen::random_state(rng, 1 + trial % 5).scaled(scale(rng));
        const auto b = gen::random_state(rng, 1 + trial % 4, 8, Site::BobKept).scaled(scale(rng));
        const double lhs = std::sqrt(tensor(a, b).norm_squared());
        const double rhs = std::sqrt(a.norm_squared()) * std::sqrt(b.norm_squared());
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs));
    }
}

// ---------- fidelity ----------

TEST(Fidelity, BasisKets) {
    const auto reg = PhotonRegister::of_site(Site::AliceKept, 2);
    EXPECT_NEAR(fidelity(PureState::basis(reg, "HV"), PureState::basis(reg, "HV")), 1.0, 1e-15);
    EXPECT_NEAR(fidelity(PureState::basis(reg, "HV"), PureState::basis(reg, "VH")), 0.0, 1e-15);
}

TEST(Fidelity, BellPairOverlapWithBasisKet) {
    const auto reg = PhotonRegister::of_site(Site::AliceKept, 2);
    // |<HV|W2>|^2 = (1/sqrt2)^2
    EXPECT_NEAR(fidelity(make_w_state(reg), PureState::basis(reg, "HV")), 0.5, 1e-15);
}

TEST(Fidelity, ShapeMismatchRejected) {
    EXPECT_THROW(fidelity(make_w_state(2, Site::AliceKept), make_w_state(3, Site::AliceKept)),
                 std::invalid_argument);
}

TEST(Fidelity, PropertySymmetricAndSelfOne) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto a = gen::random_state(rng, n);
        const auto b = gen::random_state(rng, n);
        EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
        EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-12);
        EXPECT_GE(fidelity(a, b), 0.0);
        EXPECT_LE(fidelity(a, b), 1.0 + 1e-12);
    }
}

// ---------- apply_single_qubit ----------

TEST(ApplySingleQubit, XFlipsH) {
    const auto out = apply_single_qubit(single(Site::AliceKept, "H"), kA0, gates::pauli_x());
    EXPECT_NEAR(std::abs(out.amplitude("V") - 1.0), 0.0, 1e-15);
    EXPECT_EQ(out.num_terms(), 1U);
}

TEST(ApplySingleQubit, ZOnDiagonalGivesAntiDiagonal) {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState plus(PhotonRegister::of_site(Site::AliceKept, 1),
                         {{BasisKet::from_string("H"), r}, {BasisKet::from_string("V"), r}});
    const auto out = apply_single_qubit(plus, kA0, gates::pauli_z());
    EXPECT_NEAR(out.amplitude("H").real(), r, 1e-15);
    EXPECT_NEAR(out.amplitude("V").real(), -r, 1e-15);
}

TEST(ApplySingleQubit, XTwiceIsIdentity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = gen::random_state(rng, 4);
        const auto twice = apply_single_qubit(apply_single_qubit(s, kA1, gates::pauli_x()), kA1, gates::pauli_x());
        EXPECT_LE(max_amplitude_distance(s, twice), 1e-15);
    }
}

TEST(ApplySingleQubit, Errors) {
    const auto s = single(Site::AliceKept, "H");
    EXPECT_THROW(apply_single_qubit(s, kA1, gates::pauli_x()), std::invalid_argument);
    Matrix2 not_unitary{{{1.0, 1.0}, {0.0, 1.0}}};
    EXPECT_THROW(apply_single_qubit(s, kA0, not_unitary), std::invalid_argument);
}

TEST(ApplySingleQubit, PropertyPreservesNorm) {
    std::mt19937_64 rng(2024);
    std::vector<Matrix2> unitaries{gates::pauli_x(), gates::pauli_z(), gates::hadamard()};
    for (int i = 0; i < 20; ++i) unitaries.push_back(gen::random_unitary(rng));
    for (const auto& u : unitaries) {
        ASSERT_TRUE(is_unitary(u));
        const auto s = gen::random_state(rng, 6, 24);
        for (std::uint32_t q = 0; q < 6; ++q) {
            EXPECT_NEAR(apply_single_qubit(s, {Site::AliceKept, q}, u).norm_squared(), 1.0, 1e-12);
        }
    }
}

// ---------- swap ----------

TEST(SwapPhotons, ExchangesPolarizations) {
    const auto reg = PhotonRegister::of_site(Site::AliceKept, 3);
    const auto out = swap_photons(PureState::basis(reg, "VHH"), kA0, {Site::AliceKept, 2});
    EXPECT_NEAR(std::abs(out.amplitude("HHV") - 1.0), 0.0, 1e-15);
}

// ---------- W recursion ----------

TEST(WRecursion, BellPairBase) { EXPECT_TRUE(w_recursion_check(2)); }
TEST(WRecursion, ThreePhotons) { EXPECT_TRUE(w_recursion_check(3)); }
TEST(WRecursion, EightPhotons) { EXPECT_TRUE(w_recursion_check(8)); }

TEST(WRecursion, HoldsUpToTwelve) {
    for (std::size_t n = 2; n <= 12; ++n) EXPECT_TRUE(w_recursion_check(n)) << n;
}

TEST(WRecursion, RejectsTooSmall) { EXPECT_THROW(w_recursion_check(1), std::invalid_argument); }

TEST(PureState, PrunesTinyAmplitudes) {
    const PureState s(PhotonRegister::of_site(Site::AliceKept, 1),
                      {{BasisKet::from_string("H"), 1.0}, {BasisKet::from_string("V"), 1e-16}});
    EXPECT_EQ(s.num_terms(), 1U);
}

TEST(PureState, RejectsMismatchedKetLength) {
    EXPECT_THROW(PureState(PhotonRegister::of_site(Site::AliceKept, 2), {{BasisKet::from_string("H"), 1.0}}),
                 std::invalid_argument);
}
