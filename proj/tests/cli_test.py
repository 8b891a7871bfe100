"""End-to-end checks of the command-line tool.

usage: cli_test.py PATH_TO_UNLEARN PATH_TO_REPORT_SCHEMA
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = None
SCHEMA = None


def run(*args, env=None, check=True):
    full_env = dict(os.environ)
    full_env.pop("UNLEARN_SEED", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=full_env)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


def validate(doc):
    jsonschema.validate(doc, SCHEMA)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def write(self, name, text):
        p = self.path(name)
        with open(p, "w") as f:
            f.write(text)
        return p

    def gen(self, n, d, seed=1, extra=()):
        p = self.path(f"data_{n}_{d}_{seed}.csv")
        run("gen-data", "--n", n, "--d", d, "--seed", seed, "--out", p, *extra)
        return p

    def test_gen_data_shape_and_determinism(self):
        a = run("gen-data", "--n", 10, "--d", 4, "--seed", 3).stdout
        b = run("gen-data", "--n", 10, "--d", 4, "--seed", 3).stdout
        self.assertEqual(a, b)
        rows = list(csv.reader(io.StringIO(a)))
        self.assertEqual(len(rows), 10)
        self.assertTrue(all(len(r) == 5 for r in rows))
        self.assertNotEqual(a, run("gen-data", "--n", 10, "--d", 4, "--seed", 4).stdout)
        labels = {float(r[-1]) for r in csv.reader(io.StringIO(
            run("gen-data", "--n", 20, "--d", 3, "--classification").stdout))}
        self.assertLessEqual(labels, {1.0, -1.0})

    def test_gen_data_rejects_bad_sparsity(self):
        self.assertEqual(run("gen-data", "--n", 5, "--d", 2, "--p", 0, check=False).returncode, 2)
        self.assertEqual(run("gen-data", "--n", 5, "--d", 2, "--p", 1.5, check=False).returncode, 2)

    def test_train(self):
        out = json.loads(run("train", "--data", self.write("t.csv", "1,1\n1,3\n")).stdout)
        self.assertEqual(out["n"], 2)
        self.assertAlmostEqual(out["theta"][0], 4.0 / 2.001, places=12)

    def test_all_methods_report(self):
        data = self.gen(200, 10)
        doc = json.loads(run("unlearn", "--data", data, "--delete", "random:5", "--method", "all",
                             "--seed", 7, "--json").stdout)
        validate(doc)
        self.assertEqual(doc["k"], 5)
        self.assertEqual(len(doc["deleted"]), 5)
        got = {r["method"]: r for r in doc["results"]}
        self.assertEqual(set(got), {"retrain", "newton", "influence", "gradient", "residual"})
        self.assertEqual(got["retrain"]["distance_to_retrain"], 0.0)
        self.assertLessEqual(got["newton"]["distance_to_retrain"], 1e-10)
        for r in doc["results"]:
            self.assertGreaterEqual(r["wall_time_ms"], 0.0)
            self.assertEqual(len(r["theta"]), 10)
        text = run("unlearn", "--data", data, "--delete", "3,4", "--method", "residual,retrain").stdout
        self.assertIn("residual", text)
        self.assertIn("retrain", text)

    def test_toy_deletion_matches_retrain(self):
        data = self.write("toy.csv", "1,0\n1,2\n")
        doc = json.loads(run("unlearn", "--data", data, "--delete", "0", "--method", "all", "--json").stdout)
        got = {r["method"]: r for r in doc["results"]}
        self.assertAlmostEqual(got["retrain"]["theta"][0], 2.0 / 1.001, places=12)
        self.assertLessEqual(got["residual"]["distance_to_retrain"], 1e-8)
        self.assertLessEqual(got["newton"]["distance_to_retrain"], 1e-10)

    def test_precompute_flag(self):
        data = self.gen(100, 5)
        base = json.loads(run("unlearn", "--data", data, "--delete", "1", "--json").stdout)
        incl = json.loads(run("unlearn", "--data", data, "--delete", "1", "--json",
                              "--include-precompute").stdout)
        self.assertGreaterEqual(incl["results"][0]["wall_time_ms"], incl["precompute_ms"])
        self.assertEqual(base["results"][0]["theta"], incl["results"][0]["theta"])

    def test_exit_codes(self):
        data = self.gen(30, 3)
        self.assertEqual(run("unlearn", "--data", data, "--delete", "30", check=False).returncode, 3)
        self.assertEqual(run("unlearn", "--data", self.path("missing.csv"), "--delete", "0",
                             check=False).returncode, 3)
        bad = self.write("bad.csv", "1,2\n1,x\n")
        proc = run("unlearn", "--data", bad, "--delete", "0", check=False)
        self.assertEqual(proc.returncode, 3)
        self.assertIn("2", proc.stderr)
        self.assertEqual(run("unlearn", "--data", data, "--delete", "0", "--method", "bogus",
                             check=False).returncode, 2)
        self.assertEqual(run("unlearn", "--data", data, check=False).returncode, 2)
        self.assertEqual(run("nonsense", check=False).returncode, 2)
        # Row 1 is alone on the second feature: without ridge its leverage is one.
        degenerate = self.write("deg.csv", "1,0,1\n0,1,2\n1,0,3\n")
        proc = run("unlearn", "--data", degenerate, "--delete", "1", "--lambda", 0, check=False)
        self.assertEqual(proc.returncode, 4)
        # Influence never solves the downdated system; retraining is singular,
        # so there is no distance to report.
        doc = json.loads(run("unlearn", "--data", degenerate, "--delete", "1", "--lambda", 0,
                             "--method", "influence", "--json").stdout)
        validate(doc)
        self.assertIsNone(doc["results"][0]["distance_to_retrain"])

    def test_seed_from_environment(self):
        a = run("gen-data", "--n", 5, "--d", 2, env={"UNLEARN_SEED": "11"}).stdout
        b = run("gen-data", "--n", 5, "--d", 2, "--seed", 11).stdout
        self.assertEqual(a, b)
        self.assertEqual(run("gen-data", "--n", 5, "--d", 2, env={"UNLEARN_SEED": "abc"},
                             check=False).returncode, 2)

    def test_fit_reports(self):
        prefix = self.path("fit")
        run("fit", "--n", 300, "--d", 30, "--k", 3, "--trials", 50, "--methods", "retrain",
            "--seed", 2, "--out", prefix)
        with open(prefix + ".csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 1)
        self.assertEqual(float(rows[0]["mean_fit"]), 0.0)
        self.assertEqual(int(rows[0]["trials"]), 50)
        with open(prefix + ".json") as f:
            doc = json.load(f)
        validate(doc)
        self.assertEqual(len(doc["trials"]), 50)

        first, second = self.path("a"), self.path("b")
        for p in (first, second):
            run("fit", "--n", 200, "--d", 20, "--k", 2, "--trials", 5, "--seed", 9, "--no-timing", "--out", p)
        for ext in (".csv", ".json"):
            with open(first + ext) as f, open(second + ext) as g:
                self.assertEqual(f.read(), g.read())

        stdout = run("fit", "--n", 200, "--d", 20, "--k", 2, "--trials", 3).stdout
        self.assertTrue(stdout.startswith("method,d,k,p,trials,mean_fit,median_fit,mean_time_ms"))
        self.assertEqual(run("fit", "--n", 10, "--d", 5, "--k", 10, check=False).returncode, 2)

    def test_bench_reports(self):
        prefix = self.path("bench")
        run("bench", "--n-sweep", "200,400", "--d", 20, "--k", 3, "--methods", "retrain,residual,influence",
            "--reps", 5, "--inject", "--out", prefix)
        with open(prefix + ".csv") as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 6)
        for r in rows:
            self.assertGreaterEqual(float(r["median_ms"]), 0.0)
            self.assertFalse(math.isnan(float(r["fit_score"])))
        with open(prefix + ".json") as f:
            doc = json.load(f)
        validate(doc)
        self.assertEqual(len(doc["rows"]), 6)
        self.assertEqual(run("bench", "--n-sweep", "100", "--d", 5, "--k", 2, "--reps", 2,
                             check=False).returncode, 2)
        doc = json.loads(run("bench", "--n-sweep", "100", "--d", 5, "--k", 2, "--json").stdout)
        validate(doc)
        self.assertEqual(len(doc["rows"]), 3)
        self.assertEqual(doc["rows"][0]["fit_score"], None)


if __name__ == "__main__":
    BIN = sys.argv[1]
    with open(sys.argv[2]) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0], "-v"])
