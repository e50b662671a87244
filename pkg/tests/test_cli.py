import io
import json
import subprocess
import sys

import pytest

from bakerfe.cli import parse_complex, parse_shift, run
from bakerfe.phi import INFINITY


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def doc(*argv):
    code, text, _ = call(*argv)
    return code, json.loads(text)


def cval(pair):
    return complex(pair[0], pair[1])


class TestExamples:
    def test_identify_dn(self):
        code, d = doc("identify", "--tuple", "jacobi-dn", "--m", "0.5", "--format", "json")
        assert code == 0
        r = d["results"]
        assert abs(cval(r["g2"]) - 1) <= 1e-8
        assert abs(cval(r["g3"])) <= 1e-8
        assert abs(cval(r["wp_nu1"])) <= 1e-8
        assert abs(cval(r["wp_nu2"]) + 0.5) <= 1e-8
        assert d["status"] == "ok"

    def test_verify_addn(self):
        code, d = doc("verify", "--identity", "addn", "--g2", "1", "--g3", "0", "--nu", "0.7", "--grid", "5")
        assert code == 0
        assert max(d["residuals"].values()) <= 1e-8

    def test_kernel_rational(self):
        code, d = doc("kernel", "--g2", "0", "--g3", "0", "--op", "wp", "--x", "2")
        assert code == 0
        assert d["results"]["values"][0][1] == [0.25, 0]


class TestSchema:
    def test_top_level(self):
        _, d = doc("kernel", "--op", "zeta", "--x", "0.3+0.1i")
        assert list(d) == ["command", "params", "results", "residuals", "status"]
        assert d["command"] == "kernel"

    @pytest.mark.parametrize("name", ["addn", "three-term", "translation", "wps", "zetas", "homogeneity", "phiJacs"])
    def test_every_identity(self, name):
        code, d = doc("verify", "--identity", name, "--g2", "1.3", "--g3", "0.4")
        assert code == 0, d["status"]

    @pytest.mark.parametrize("tup", ["canonical", "jacobi-dn", "jacobi-cn", "jacobi-sn"])
    def test_every_tuple(self, tup):
        code, d = doc("identify", "--tuple", tup, "--m", "0.5")
        assert code == 0, d["status"]

    @pytest.mark.parametrize("cmd", ["example1", "example2", "example3", "orbit"])
    def test_drivers(self, cmd):
        code, d = doc(cmd)
        assert code == 0, d["status"]

    def test_example2_infinite_shift(self):
        _, d = doc("example2")
        assert d["results"]["reidentified"]["nu2"] == "infinity"
        assert abs(cval(d["results"]["N2"]) - 2) <= 1e-12

    def test_seeded_identify(self):
        code, d = doc("identify", "--g2", "1.3", "--g3", "0.4", "--seed", "7")
        assert code == 0
        assert abs(cval(d["results"]["g2"]) - 1.3) <= 1.3e-6

    def test_csv(self):
        code, text, _ = call("verify", "--identity", "wps", "--grid", "3", "--format", "csv")
        lines = text.strip().splitlines()
        assert code == 0
        assert lines[0] == "x_re,x_im,y_re,y_im,residual"
        assert len(lines) == 10
        assert all(len(row.split(",")) == 5 for row in lines[1:])

    def test_float_precision(self):
        _, text, _ = call("kernel", "--op", "wp", "--x", "0.3")
        v = json.loads(text)["results"]["values"][0][1][0]
        assert repr(v) in text


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("orbit", "--seed", "11"),
        ("identify", "--seed", "3", "--g2", "2", "--g3", "-0.3"),
        ("example3",),
    ])
    def test_byte_identical(self, argv):
        assert call(*argv)[1] == call(*argv)[1]

    def test_subprocess_identical(self):
        cmd = [sys.executable, "-m", "bakerfe", "orbit", "--seed", "5"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b


class TestExitCodes:
    def test_usage(self):
        assert call()[0] == 2
        assert call("nosuch")[0] == 2

    def test_unknown_identity(self):
        code, _, err = call("verify", "--identity", "bogus")
        assert code == 3 and "bogus" in err

    def test_unknown_tuple(self):
        assert call("identify", "--tuple", "bogus")[0] == 3

    def test_unknown_op(self):
        assert call("kernel", "--op", "bogus", "--x", "0.2")[0] == 3

    def test_invalid_params(self):
        assert call("verify", "--identity", "addn", "--tol", "-1")[0] == 4
        assert call("identify", "--jet-order", "5")[0] == 4
        assert call("example1", "--m", "1.5")[0] == 4

    def test_nongeneric_example2(self):
        assert call("example2", "--phi4p", "-1")[0] == 4

    def test_identification_failure(self):
        # the sn tuple is not generic at the origin
        assert call("identify", "--tuple", "jacobi-sn", "--m", "0.5", "--x0", "0")[0] == 5

    def test_residual_over_tol(self):
        code, d = doc("verify", "--identity", "addn", "--tol", "1e-30")
        assert code == 1
        assert d["status"].startswith("fail")


class TestParsing:
    def test_complex(self):
        assert parse_complex("0.3+0.2i") == 0.3 + 0.2j
        assert parse_complex("2") == 2

    def test_shift(self):
        assert parse_shift("inf") is INFINITY
        assert parse_shift("-0.5i") == -0.5j
