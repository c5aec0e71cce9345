import numpy as np
import pytest
from hypothesis import given, settings, HealthCheck
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from fulldisp import SnapshotError
from fulldisp.harness.snapshot import check_resume, read_snapshot, write_snapshot

META = {"model": "FDGN1", "n": 8, "nz": 16, "L": 2 * np.pi, "mu": 0.3, "eps": 0.1, "t": 0.25}


def sample(n=8, seed=0):
    rng = np.random.default_rng(seed)
    return np.linspace(0, 1, n, endpoint=False), rng.standard_normal(n), rng.standard_normal(n) * 1e-7


def test_round_trip_bit_identical(tmp_path):
    x, z, p = sample()
    path = write_snapshot(tmp_path / "s.csv", x, z, p, META)
    snap = read_snapshot(path)
    for a, b in ((x, snap.x), (z, snap.zeta), (p, snap.second)):
        assert np.array_equal(a, b)
    assert snap.mu == 0.3 and snap.t == 0.25 and snap.second_name == "psi"
    assert snap.meta["schema-version"] == "1"


@settings(max_examples=25, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(hnp.arrays(np.float64, 8, elements=st.floats(allow_nan=False, allow_infinity=False, width=64)))
def test_round_trip_any_finite_values(tmp_path, arr):
    path = write_snapshot(tmp_path / "h.csv", arr, arr[::-1], -arr, META, second_name="w")
    snap = read_snapshot(path)
    assert np.array_equal(snap.zeta, arr[::-1]) and np.array_equal(snap.second, -arr)
    assert snap.second_name == "w"


def _write(tmp_path, text):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    return p


def _good_text(tmp_path):
    return write_snapshot(tmp_path / "g.csv", *sample(), META).read_text()


def test_missing_header_key(tmp_path):
    text = "\n".join(l for l in _good_text(tmp_path).splitlines() if not l.startswith("#mu="))
    with pytest.raises(SnapshotError, match="mu"):
        read_snapshot(_write(tmp_path, text))


def test_schema_mismatch(tmp_path):
    text = _good_text(tmp_path).replace("#schema-version=1", "#schema-version=2")
    with pytest.raises(SnapshotError, match="schema-version"):
        read_snapshot(_write(tmp_path, text))


def test_errors_name_the_line(tmp_path):
    lines = _good_text(tmp_path).splitlines()
    first_data = next(i for i, l in enumerate(lines) if l.startswith("x,")) + 1
    for bad, pattern in (("1,2", "3 columns"), ("1,nan,2", "non-finite"), ("1,abc,2", "unparsable")):
        edited = list(lines)
        edited[first_data + 2] = bad
        with pytest.raises(SnapshotError, match=rf":{first_data + 3}: .*{pattern}"):
            read_snapshot(_write(tmp_path, "\n".join(edited)))


def test_row_count_and_missing_file(tmp_path):
    text = "\n".join(_good_text(tmp_path).splitlines()[:-1])
    with pytest.raises(SnapshotError, match="n=8"):
        read_snapshot(_write(tmp_path, text))
    with pytest.raises(SnapshotError):
        read_snapshot(tmp_path / "nope.csv")


def test_write_refuses_bad_input(tmp_path):
    x, z, p = sample()
    with pytest.raises(SnapshotError):
        write_snapshot(tmp_path / "a.csv", x, z, p, {"model": "WB"})
    z[0] = np.inf
    with pytest.raises(SnapshotError):
        write_snapshot(tmp_path / "a.csv", x, z, p, META)


def test_resume_guard(tmp_path):
    snap = read_snapshot(write_snapshot(tmp_path / "s.csv", *sample(), META))
    check_resume(snap, "FDGN1", 8, 0.3, 0.1)
    with pytest.raises(SnapshotError, match="mu"):
        check_resume(snap, "FDGN1", 8, 0.3000000001, 0.1)
    with pytest.raises(SnapshotError, match="model"):
        check_resume(snap, "WB", 8, 0.3, 0.1)
