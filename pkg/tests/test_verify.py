import copy
import random

from binorm.certificates import Certificate, Letter, binorm_certificate, default_generating_set
from binorm.chevalley import elementary
from binorm.groups import Matrix
from binorm.rings import ZZ
from binorm.verify import verify_certificate
from support import random_sl


def _cert(seed=30):
    return binorm_certificate(random_sl(random.Random(seed), 3, ZZ, 20, 10**6))


def test_empty_certificate_of_identity_passes():
    S = default_generating_set(3, ZZ)
    rep = verify_certificate(Certificate(Matrix.identity_matrix(3), [], S, 0))
    assert rep.ok and rep.letter_count == 0


def test_flipped_sign_is_localized():
    cert = _cert()
    bad = copy.deepcopy(cert)
    bad.letters[4].sign = -bad.letters[4].sign
    rep = verify_certificate(bad)
    assert not rep.ok
    assert rep.first_mismatch == 4


def test_generator_index_outside_s_is_malformed():
    cert = _cert()
    bad = copy.deepcopy(cert)
    bad.letters[1].gen_index = len(cert.generating_set) + 3
    rep = verify_certificate(bad)
    assert not rep.ok and rep.malformed and rep.first_mismatch == 1
    assert "outside S" in rep.message


def test_non_invertible_conjugator_is_malformed():
    cert = _cert()
    bad = copy.deepcopy(cert)
    rows = [list(r) for r in bad.letters[0].conjugator.rows]
    rows[0][0] = rows[0][0] + 1
    bad.letters[0] = Letter(Matrix(rows, ZZ), bad.letters[0].gen_index, bad.letters[0].sign)
    rep = verify_certificate(bad)
    assert not rep.ok and rep.first_mismatch == 0


def test_wrong_claimed_bound_is_malformed():
    cert = _cert()
    bad = copy.deepcopy(cert)
    bad.claimed_norm_bound -= 1
    assert not verify_certificate(bad).ok


def test_wrong_target_fails_without_checkpoints():
    S = default_generating_set(3, ZZ)
    cert = binorm_certificate(elementary("A", 3, (1, 3), 5), S)
    bad = Certificate(elementary("A", 3, (1, 3), 6), cert.letters, S, cert.length)
    rep = verify_certificate(bad)
    assert not rep.ok and rep.first_mismatch == 0


def test_report_dict_is_json_ready():
    rep = verify_certificate(_cert()).as_dict()
    assert rep["ok"] is True and rep["malformed"] == []
