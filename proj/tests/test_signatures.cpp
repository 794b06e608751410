#include <gtest/gtest.h>

#include "tracemix/signatures.hpp"

using namespace tracemix;

namespace {

class SignatureTest : public ::testing::Test {
protected:
    SetupParams params = setup(to_bytes("signatures"), 2, 4);
    Rng rng{202};
};

TEST_F(SignatureTest, BbSignThenVerify) {
    BBKeyPair key = bb_keygen(params, rng);
    for (int t = 0; t < 100; ++t) {
        Scalar v = random_scalar(rng);
        G1 sigma = bb_sign(params, key, v);
        EXPECT_TRUE(bb_verify(params, key.y, v, sigma));
    }
}

TEST_F(SignatureTest, BbWrongMessageRejected) {
    BBKeyPair key = bb_keygen(params, rng);
    Scalar v = random_scalar(rng);
    G1 sigma = bb_sign(params, key, v);
    EXPECT_FALSE(bb_verify(params, key.y, v + Scalar::from_u64(1), sigma));
}

TEST_F(SignatureTest, BbFakeElementRejected) {
    BBKeyPair key = bb_keygen(params, rng);
    G1 fake = fake_bb_signature(params);
    for (int t = 0; t < 20; ++t) {
        EXPECT_FALSE(bb_verify(params, key.y, random_scalar(rng), fake));
    }
}

TEST_F(SignatureTest, BbDegenerateMessageErrors) {
    BBKeyPair key = bb_keygen(params, rng);
    EXPECT_THROW(bb_sign(params, key, -key.x), DegenerateMessageError);
}

TEST_F(SignatureTest, BbsPlusSignThenVerify) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    for (int t = 0; t < 100; ++t) {
        Scalar v = random_scalar(rng);
        BBSPlusSignature sig = bbsplus_sign(params, key, v, rng);
        EXPECT_TRUE(bbsplus_verify(params, key.y, v, sig));
    }
}

TEST_F(SignatureTest, BbsPlusTamperedRandomnessRejected) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    Scalar v = random_scalar(rng);
    BBSPlusSignature sig = bbsplus_sign(params, key, v, rng);
    sig.r = sig.r + Scalar::from_u64(1);
    EXPECT_FALSE(bbsplus_verify(params, key.y, v, sig));
}

TEST_F(SignatureTest, BbsPlusIdentityComponentRejected) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    for (int t = 0; t < 10; ++t) {
        BBSPlusSignature fake{random_scalar(rng), random_scalar(rng), fake_quasi_s_component()};
        EXPECT_FALSE(bbsplus_verify(params, key.y, random_scalar(rng), fake));
    }
}

TEST_F(SignatureTest, QuasiSignVerq) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    for (int t = 0; t < 20; ++t) {
        Commitment gamma = commit(params, random_scalar(rng), random_scalar(rng));
        QuasiBBSPlusSignature q = quasi_sign(params, key, gamma, rng);
        EXPECT_TRUE(verq(params, q, gamma, key.y));
        Commitment other = commit(params, random_scalar(rng), random_scalar(rng));
        EXPECT_FALSE(verq(params, q, other, key.y));
    }
}

TEST_F(SignatureTest, QuasiDerivesToFullSignature) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    for (int t = 0; t < 3; ++t) {
        Scalar v = random_scalar(rng), r = random_scalar(rng);
        Commitment gamma = commit(params, v, r);
        QuasiBBSPlusSignature q = quasi_sign(params, key, gamma, rng);
        BBSPlusSignature sig = derive_from_quasi(q, r);
        EXPECT_TRUE(bbsplus_verify(params, key.y, v, sig));
        // Wrong derivation randomness does not verify.
        BBSPlusSignature bad = derive_from_quasi(q, r + Scalar::from_u64(1));
        EXPECT_FALSE(bbsplus_verify(params, key.y, v, bad));
    }
}

TEST_F(SignatureTest, QuasiSerializationRoundTrip) {
    BBSPlusKeyPair key = bbsplus_keygen(params, rng);
    Commitment gamma = commit(params, random_scalar(rng), random_scalar(rng));
    QuasiBBSPlusSignature q = quasi_sign(params, key, gamma, rng);
    auto back = QuasiBBSPlusSignature::from_bytes(q.to_bytes());
    ASSERT_TRUE(back.has_value());
    EXPECT_TRUE(verq(params, *back, gamma, key.y));
}

}  // namespace
