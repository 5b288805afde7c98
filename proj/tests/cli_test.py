"""End-to-end checks of the intmult command-line tool."""

import json
import math
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

CLI = str(Path(sys.argv.pop(1) if len(sys.argv) > 1 else "build/tools/intmult").resolve())


def run(*args, cwd):
    return subprocess.run([CLI, *map(str, args)], cwd=cwd, capture_output=True, text=True, timeout=300)


def z2_plus_1():
    one, zero = ["1", "1", "0", "1"], ["0", "1", "0", "1"]
    return {"field_d": None, "num": [one, zero, one], "den": [one]}


class CliTest(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)
        r = run("maps", "power", "--d", 2, "--out", "power2.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)

    def tearDown(self):
        self._tmp.cleanup()

    def test_chebyshev_map(self):
        r = run("maps", "chebyshev", "--d", 2, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = json.loads(r.stdout)
        self.assertEqual(j["description"], "z^2 - 2")
        self.assertEqual(j["config"]["command"], "maps chebyshev")
        self.assertEqual([int(c[0]) for c in j["num"]], [-2, 0, 1])

    def test_spectrum_power2(self):
        r = run("spectrum", "--map", "power2.json", "--pmax", 2, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = r.stdout.strip().splitlines()
        self.assertEqual(lines[0], "period,orbit_index,re_lambda,im_lambda,residual,multiplicity")
        rows = [l.split(",") for l in lines[1:]]
        p1 = sorted(round(float(x[2])) for x in rows if x[0] == "1")
        p2 = [float(x[2]) for x in rows if x[0] == "2"]
        self.assertEqual(p1, [0, 0, 2])
        self.assertEqual(len(p2), 1)
        self.assertAlmostEqual(p2[0], 4.0, places=10)

    def test_spectrum_json(self):
        r = run("spectrum", "--map", "power2.json", "--pmax", 2, "--json", "s.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = json.loads((self.dir / "s.json").read_text())
        self.assertEqual(j["config"]["pmax"], 2)
        self.assertEqual(len(j["periods"]["1"]), 3)

    def test_classify_power2_consistent(self):
        r = run("classify", "--map", "power2.json", "--pmax", 3, "--dmax", 10, "--json", "v.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        v = json.loads((self.dir / "v.json").read_text())
        self.assertEqual(v["status"], "consistent")
        self.assertEqual(v["fields_surviving"], [1, 2, 3, 5, 6, 7, 10])
        self.assertEqual(v["config"]["dmax"], 10)

    def test_classify_refuted_exit_code(self):
        (self.dir / "q.json").write_text(json.dumps(z2_plus_1()))
        r = run("classify", "--map", "q.json", "--pmax", 3, "--dmax", 30, cwd=self.dir)
        self.assertEqual(r.returncode, 1, r.stderr)
        v = json.loads(r.stdout)
        self.assertEqual(v["status"], "refuted")
        for rej in v["rejections"]:
            self.assertGreater(rej["distance"], 10 * v["tol"])
        # period 4 brings cubic multipliers, far from every imaginary quadratic ring
        r = run("classify", "--map", "q.json", "--pmax", 4, "--dmax", 163, cwd=self.dir)
        self.assertEqual(r.returncode, 1, r.stderr)
        v = json.loads(r.stdout)
        self.assertGreater(v["witness"]["min_distance"], 10 * v["tol"])

    def test_classify_inconclusive_exit_code(self):
        r = run("classify", "--map", "power2.json", "--pmax", 2, "--dmax", 10, "--tol", "1e-30", cwd=self.dir)
        self.assertEqual(r.returncode, 2, r.stderr)
        self.assertEqual(json.loads(r.stdout)["status"], "inconclusive")

    def test_deterministic_output(self):
        outs = [run("classify", "--map", "power2.json", "--pmax", 3, "--dmax", 20, cwd=self.dir).stdout for _ in range(2)]
        self.assertEqual(outs[0], outs[1])

    def test_koenigs_log(self):
        one, zero, two = ["1", "1", "0", "1"], ["0", "1", "0", "1"], ["2", "1", "0", "1"]
        (self.dir / "k.json").write_text(json.dumps({"field_d": None, "num": [zero, two, one], "den": [one]}))
        r = run("koenigs", "--map", "k.json", "--z1", "0", "--at", "0.1", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = json.loads(r.stdout)
        self.assertLess(abs(float(j["values"][0]["phi"][0]) - math.log(1.1)), 1e-10)
        self.assertLess(j["residual"], 1e-10)

    def test_eql_extract_and_verify(self):
        r = run("eql", "extract", "--map", "power2.json", "--trace", "trace.json", "--out", "eql.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        e = json.loads((self.dir / "eql.json").read_text())
        self.assertTrue(e["invariants"]["ok"])
        self.assertIn("config", json.loads((self.dir / "trace.json").read_text()))
        r = run("eql", "verify", "--eql", "eql.json", "--nmax", 6, "--out", "report.json", cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        rep = json.loads((self.dir / "report.json").read_text())
        for key in ("a", "b", "a_hat", "b_hat", "claim", "ode", "affinity", "config"):
            self.assertIn(key, rep)
        self.assertTrue(rep["affinity"]["affine_conjugate"])
        self.assertLess(abs(complex(*map(float, rep["b"]))), 1e-6)
        self.assertLess(rep["ode"]["residual"], 1e-6)

    def test_verify_suite(self):
        r = run("verify-suite", "--pmax", 2, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(json.loads(r.stdout)["pass"])

    def test_usage_errors(self):
        for args in (["classify", "--map", "missing.json"], ["maps", "power", "--d", 1], ["spectrum"],
                     ["verify-suite", "--pmax", 9], ["classify", "--map", "power2.json", "--bits", "2"]):
            r = run(*args, cwd=self.dir)
            self.assertEqual(r.returncode, 2, args)
            err = json.loads(r.stderr.strip().splitlines()[-1])
            self.assertEqual(set(err), {"error", "message"})

    def test_map_json_round_trip(self):
        r = run("spectrum", "--map", "power2.json", "--pmax", 1, cwd=self.dir)
        self.assertEqual(r.returncode, 0, r.stderr)


if __name__ == "__main__":
    unittest.main()
