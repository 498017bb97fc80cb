import json
import math

import pytest
from hypothesis import given, strategies as st

from strongprops.constructs import (Certificate, Claim, all_ones, assert_certificate,
                                    check_claim, corpus, diag_distinct, direct_sum,
                                    dump_corpus, flipped_cycle, flipped_cycle_matrix,
                                    get_certificate, load_certificates, shifted,
                                    verify_certificate)
from strongprops.errors import CorpusIntegrityError, DistinctnessError, DomainError
from strongprops.matgraph import are_isomorphic, cycle, h_tree, star
from strongprops.scalars import ExactMatrix, ExactScalar
from strongprops.spectra import q_exact
from strongprops.verify import check_witness, verify_by_definition, verify_smp, verify_ssp


@pytest.mark.parametrize("n", range(3, 13))
def test_flipped_cycle_q(n):
    cert = flipped_cycle(n)
    assert cert.graph == cycle(n)
    assert q_exact(cert.matrix) == math.ceil(n / 2) == cert.q
    assert not verify_certificate(cert)


@pytest.mark.parametrize("n", range(3, 10))
def test_flipped_cycle_smp(n):
    assert verify_smp(flipped_cycle_matrix(n)).verdict


@pytest.mark.parametrize("n", range(5, 13))
def test_flipped_cycle_ssp_fails_with_square_witness(n):
    cert = flipped_cycle(n)
    assert not verify_ssp(cert.matrix).verdict
    X = dict(cert.witnesses)["SSP"]
    assert check_witness(cert.matrix, X, "SSP")


def test_flipped_cycle_small_cases():
    c4 = flipped_cycle(4)
    assert c4.claim("SSP") and c4.q == 2
    assert sorted(round(v, 12) for v in c4.claim("spectrum_float")) == \
        [round(-math.sqrt(2), 12)] * 2 + [round(math.sqrt(2), 12)] * 2
    c5 = flipped_cycle(5)
    assert c5.q == 3 and c5.claim("SMP") and not c5.claim("SSP")
    c7 = flipped_cycle(7)
    assert c7.q == 4 and min(c7.claim("spectrum_float")) == pytest.approx(-2)
    assert c7.claim("multiplicity_list") == (1, 2, 2, 2)
    # K3: every matrix on a complete graph has the SSP
    assert flipped_cycle(3).claim("SSP")
    with pytest.raises(DomainError):
        flipped_cycle(2)


def test_diag_distinct():
    c = diag_distinct([1])
    assert c.n == 1 and c.claim("SSP")
    c = diag_distinct([0, 1, 2, 3])
    assert c.graph.num_edges == 0 and c.q == 4 and not verify_certificate(c)
    assert verify_by_definition(c.matrix, prop="SSP").verdict
    with pytest.raises(DistinctnessError):
        diag_distinct([1, 1])


def test_direct_sum_examples(certs):
    J3 = all_ones(3)
    s = direct_sum(J3, shifted(J3, 5))
    assert s.claim("SSP") and s.q == 4
    assert verify_by_definition(s.matrix, prop="SSP").verdict
    s = direct_sum(certs["exstar"], diag_distinct([7]))
    assert s.claim("SSP") and s.q == 4
    assert verify_by_definition(s.matrix, prop="SSP").verdict
    s = direct_sum(J3, J3)
    assert s.claim("SSP") is None and s.claim("SMP") is None and s.q == 2
    for c in (direct_sum(J3, J3), direct_sum(J3, shifted(J3, 5))):
        assert not verify_certificate(c)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True),
       st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True))
def test_direct_sum_claims_reverify(a, b):
    s = direct_sum(diag_distinct(a), all_ones(len(b)) if len(b) > 1 else diag_distinct(b))
    assert not verify_certificate(s)


def test_corpus_contents(certs):
    assert {"exstar", "exdistinctnoSSP", "SMPnotSAP", "bowtie",
            "prop:HHY3/A1", "prop:HHY3/A2", "prop:HHY3/A3", "prop:HHY3/A4"} <= set(certs)
    a1 = certs["prop:HHY3/A1"]
    assert are_isomorphic(a1.graph, h_tree()) and a1.claim("SSP") and a1.q == 4
    assert certs["bowtie"].matrix.d == 6
    s = certs["SMPnotSAP"]
    assert s.claim("SAP") is True and s.claim("SMP") is False
    assert sorted(s.claim("spectrum")) == ["0"] * 4 + ["4"] * 4
    ex = certs["exstar"]
    assert ex.graph == star(3) or are_isomorphic(ex.graph, star(3))
    assert {ExactScalar.parse(v) for v in ex.claim("spectrum")} == \
        {ExactScalar(0), ExactScalar.sqrt(3), -ExactScalar.sqrt(3)}


def test_every_corpus_claim_checks():
    for cert in corpus():
        assert not verify_certificate(cert), cert.id


def test_certificate_json_round_trip(certs):
    for cert in certs.values():
        back = Certificate.from_json(json.loads(json.dumps(cert.to_json())))
        assert back == cert


def test_corpus_file_round_trip(tmp_path, certs):
    path = tmp_path / "c.json"
    path.write_text(dump_corpus(list(certs.values())))
    assert [c.id for c in load_certificates(str(path))] == [c.id for c in certs.values()]
    assert len(corpus(str(path))) == len(certs)


def test_tampered_claim_fails_loudly(tmp_path, certs):
    obj = certs["exstar"].to_json()
    for c in obj["claims"]:
        if c["claim"] == "q":
            c["value"] = 2
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"certificates": [obj]}))
    with pytest.raises(CorpusIntegrityError) as err:
        corpus(str(path))
    assert "exstar" in str(err.value)


def test_pattern_mismatch_rejected(certs):
    obj = certs["exstar"].to_json()
    obj["edges"] = obj["edges"][:-1]
    with pytest.raises(CorpusIntegrityError):
        Certificate.from_json(obj)


def test_false_claims_caught():
    c = diag_distinct([1, 2])
    assert check_claim(c, Claim("q", 1)) is not None
    assert check_claim(c, Claim("spectrum", ("1", "3"))) is not None
    assert check_claim(c, Claim("SSP", False)) is not None
    bad = Certificate("bad", c.graph, c.matrix, (Claim("SMP", False),))
    with pytest.raises(CorpusIntegrityError):
        assert_certificate(bad)


def test_env_override(tmp_path, monkeypatch, certs):
    path = tmp_path / "one.json"
    path.write_text(dump_corpus([certs["bowtie"]]))
    monkeypatch.setenv("STRONGPROPS_CORPUS", str(path))
    assert [c.id for c in corpus()] == ["bowtie"]
    with pytest.raises(KeyError):
        get_certificate("exstar")


def test_shift_keeps_claims(certs):
    s = shifted(certs["exstar"], 2)
    assert not verify_certificate(s) and s.claim("SSP") and s.q == 3
