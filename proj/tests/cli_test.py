#!/usr/bin/env python3
# Copyright 2026 The ripu Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the ripu command-line tool."""

import csv
import json
import os
import random
import shutil
import struct
import subprocess
import sys
import tempfile

RIPU = sys.argv[1]
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("RIPU_LOG", None)
    full_env.update(env or {})
    return subprocess.run([RIPU, *args], capture_output=True, text=True, env=full_env)


def write_rptf(path, dtype, dims, fmt, values):
    with open(path, "wb") as f:
        f.write(b"RPTF" + bytes([1, dtype, len(dims), 0]))
        f.write(struct.pack("<%dI" % len(dims), *dims))
        f.write(struct.pack("<%d%s" % (len(values), fmt), *values))


def read_u16(path):
    with open(path, "rb") as f:
        data = f.read()
    rank = data[6]
    dims = struct.unpack_from("<%dI" % rank, data, 8)
    count = 1
    for d in dims:
        count *= d
    return struct.unpack_from("<%dH" % count, data, 8 + 4 * rank)


def single_error_line(proc, code):
    lines = proc.stderr.strip().splitlines()
    return len(lines) == 1 and lines[0].startswith(code + ":")


def random_prediction(path, h, w, c, seed):
    rng = random.Random(seed)
    values = []
    for _ in range(h * w):
        row = [rng.uniform(0.01, 1.0) for _ in range(c)]
        s = sum(row)
        values.extend(v / s for v in row)
    write_rptf(path, 0, [h, w, c], "f", values)


def main():
    tmp = tempfile.mkdtemp(prefix="ripu_cli_")
    try:
        p = lambda *parts: os.path.join(tmp, *parts)

        r = run("gen", "--preset", "desk-v1", "--out-dir", p("data"), "--seed", "4",
                "--height", "24", "--width", "24", "--object-size-min", "2",
                "--object-size-max", "5", "--objects-max", "6", "--source-train", "6",
                "--target-train", "4", "--target-val", "2")
        check(r.returncode == 0, "gen exits 0")
        manifest = p("data", "manifest.json")
        check(os.path.exists(manifest), "gen writes manifest.json")
        check(os.path.exists(p("data", "run.json")), "gen writes run.json")

        random_prediction(p("pred.rptf"), 64, 64, 3, 1)
        r = run("score", "--pred", p("pred.rptf"), "--out-dir", p("score"))
        check(r.returncode == 0, "score exits 0")
        for plane in ("impurity", "entropy", "uncertainty", "score"):
            check(os.path.exists(p("score", plane + ".rptf")), "score writes " + plane)

        gt = [(i // 16 + j // 16) % 3 for i in range(64) for j in range(64)]
        write_rptf(p("gt.rptf"), 2, [64, 64], "H", gt)
        r = run("select", "--pred", p("pred.rptf"), "--labels", p("gt.rptf"),
                "--mode", "ra", "--budget", "2.2%", "--rounds", "5", "--out-dir", p("sel"))
        check(r.returncode == 0, "select exits 0")
        with open(p("sel", "picks.csv")) as f:
            rows = list(csv.DictReader(f))
        spent = sum(int(row["pixels_spent"]) for row in rows)
        check(90 <= spent <= 98, "select spends 90 pixels (+ overshoot bound) over 5 rounds: %d" % spent)
        check({int(row["round"]) for row in rows} <= set(range(1, 6)), "picks carry rounds 1..5")
        ann = read_u16(p("sel", "annotation.rptf"))
        labeled = [n for n, v in enumerate(ann) if v != 0xFFFF]
        check(len(labeled) == spent, "annotation holds exactly the spent pixels")
        check(all(ann[n] == gt[n] for n in labeled), "annotation copies ground truth")

        r = run("select", "--pred", p("pred.rptf"), "--annotation", p("sel", "annotation.rptf"),
                "--labels", p("gt.rptf"), "--budget", "2.2%", "--round", "1",
                "--out-dir", p("sel2"))
        check(r.returncode == 0, "select continues from an annotation")
        ann2 = read_u16(p("sel2", "annotation.rptf"))
        check(all(ann2[n] == ann[n] for n in labeled), "earlier annotations are kept")

        bad_gt = list(gt)
        bad_gt[10] = 7
        write_rptf(p("bad_gt.rptf"), 2, [64, 64], "H", bad_gt)
        r = run("eval", "--pred", p("pred.rptf"), "--labels", p("bad_gt.rptf"),
                "--out-dir", p("eval_bad"))
        check(r.returncode == 3, "eval with a class-count mismatch exits 3")
        check(single_error_line(r, "RIPU_E_VALIDATION"), "mismatch prints one RIPU_E_VALIDATION line")
        check("class count" in r.stderr, "mismatch message names the class count")

        r = run("eval", "--pred", p("pred.rptf"), "--labels", p("gt.rptf"), "--out-dir", p("eval"))
        check(r.returncode == 0, "eval exits 0")
        with open(p("eval", "metrics.json")) as f:
            metrics = json.load(f)
        check(0.0 <= metrics["miou"] <= 1.0 and len(metrics["classes"]) == 3, "metrics.json has miou and iou")

        r = run("bench", "--manifest", manifest, "--strategies", "", "--out-dir", p("bench0"))
        check(r.returncode == 2, "bench with an empty strategy list exits 2")
        check(single_error_line(r, "RIPU_E_USAGE"), "empty list prints one RIPU_E_USAGE line")

        r = run("score", "--pred", p("missing.rptf"), "--out-dir", p("x"))
        check(r.returncode == 4, "missing input exits 4")
        check(single_error_line(r, "RIPU_E_IO"), "missing input prints one RIPU_E_IO line")

        with open(p("junk.rptf"), "wb") as f:
            f.write(b"NOPE1234")
        r = run("score", "--pred", p("junk.rptf"), "--out-dir", p("x"))
        check(r.returncode == 3, "malformed RPTF exits 3")

        r = run("score", "--frobnicate")
        check(r.returncode == 2, "unknown flag exits 2")
        r = run("score", "--pred", p("pred.rptf"), "--out-dir", p("x"), env={"RIPU_LOG": "loud"})
        check(r.returncode == 2, "invalid RIPU_LOG exits 2")

        r = run("train", "--manifest", manifest, "--out-dir", p("train"), "--iters", "30",
                "--pretrain-iters", "20", "--seed", "2")
        check(r.returncode == 0, "train exits 0")
        check("miou=" in r.stdout, "train prints miou")
        for name in ("params.rptf", "trace.csv", "metrics.json", "run.json"):
            check(os.path.exists(p("train", name)), "train writes " + name)

        r = run("train", "--print-config", "--mode", "pa")
        cfg = json.loads(r.stdout)
        check(r.returncode == 0 and cfg["k"] == 32 and cfg["tau"] == 0.05 and cfg["alpha1"] == 0.1
              and cfg["alpha2"] == 1.0, "pa defaults load without flags")

        r = run("eval", "--params", p("train", "params.rptf"), "--manifest", manifest,
                "--out-dir", p("eval_params"))
        check(r.returncode == 0, "eval of stored params exits 0")

        r = run("replay", "--run", p("train", "run.json"), "--out-dir", p("replay"))
        check(r.returncode == 0, "replay reproduces train outputs")
        with open(p("train", "run.json")) as f:
            record = json.load(f)
        record["outputs"][0]["sha256"] = "0" * 64
        with open(p("tampered.json"), "w") as f:
            json.dump(record, f)
        r = run("replay", "--run", p("tampered.json"), "--out-dir", p("replay2"))
        check(r.returncode == 3, "replay detects a digest mismatch")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)

    print("%d failure(s)" % len(failures))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
