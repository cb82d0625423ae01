"""Smoke tests for the python bindings."""

import hashlib

import pufauth


def test_sha256_matches_hashlib():
    for payload in [b"", b"abc", b"x" * 1000]:
        assert pufauth.sha256(payload) == hashlib.sha256(payload).digest()


def test_hash_concat_is_boundary_safe():
    assert pufauth.hash_concat([b"ab", b"c"]) != pufauth.hash_concat([b"a", b"bc"])
    assert pufauth.hash_concat([b"ab", b"c"]) == pufauth.hash_concat([b"ab", b"c"])


def test_xor_involution():
    a = bytes(range(32))
    b = bytes(reversed(range(32)))
    assert pufauth.xor256(pufauth.xor256(a, b), b) == a


def test_puf_is_deterministic_per_device():
    d1 = pufauth.PufDevice(b"\x01" * 32)
    d2 = pufauth.PufDevice(b"\x02" * 32)
    challenge = b"\x03" * 32
    assert d1.eval(challenge) == d1.eval(challenge)
    assert d1.eval(challenge) != d2.eval(challenge)


def test_fuzzy_extractor_roundtrip_with_noise():
    rng = pufauth.Rng(7)
    biometric = "110011"
    s1, s2 = pufauth.fe_gen(biometric, 2, 3, rng)
    assert pufauth.fe_rep(biometric, s2, 2, 3) == s1
    noisy = pufauth.perturb_biometric(biometric, 1, rng)
    assert pufauth.fe_rep(noisy, s2, 2, 3) == s1


def test_honest_sessions():
    for variant in ["p21-fix", "p21-enh", "p22", "p22-enh"]:
        result = pufauth.run_session(variant, seed=3)
        assert result["complete"], variant
        assert result["ud_session_key"] == result["gw_user_session_key"]
        if variant.startswith("p22"):
            assert result["ud_session_key"] == result["sn_session_key"]

    broken = pufauth.run_session("p21-aw", seed=3)
    assert broken["outcome"] == "rejected:m3:user-auth"


def test_session_is_deterministic():
    a = pufauth.run_session("p22-enh", seed=11, with_trace=True)
    b = pufauth.run_session("p22-enh", seed=11, with_trace=True)
    assert a["trace"] == b["trace"]


def test_attacks_match_expectations():
    replay = pufauth.run_attack("p21-fix", "a4-replay", seed=2)
    assert replay["succeeded"] and replay["expected"]
    assert replay["evidence"]["desync"]

    defended = pufauth.run_attack("p21-enh", "a4-replay", seed=2)
    assert not defended["succeeded"] and not defended["expected"]

    leak = pufauth.run_attack("p21-aw", "a2-plaintext-sk", seed=2)
    assert leak["succeeded"]
    assert "recovered_key" in leak["evidence"]


def test_mini_matrix():
    report = pufauth.run_matrix(seeds=1, trials=5)
    assert report["mismatches"] == []
    assert report["matrix"]["a3-identity-mod"]["p22"]["succeeded"]
    assert not report["matrix"]["a3-identity-mod"]["p22-enh"]["succeeded"]
    assert report["op_count_deltas"]["p21-enh vs p21-fix"]["hash"] <= 3
