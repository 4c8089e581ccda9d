"""Suite execution, report emission, and CLI exit codes."""

import json

import pytest

from qscheck import cli, harness, padic, theorems
from qscheck.errors import ConfigError
from qscheck.harness import (
    CaseResult,
    Report,
    SuiteSpec,
    cross_limit_check,
    exit_code,
    format_report,
    ring_property_sweep,
    run_suite,
)


def spec(suite, **kw):
    return SuiteSpec(suite, **kw)


class TestEnumeration:
    def test_thm_a_small_range(self):
        rep = run_suite(spec("thm-a", n_max=13))
        assert [c.id for c in rep.cases] == \
            ["thm-a:n=1", "thm-a:n=7", "thm-a:n=13"]
        assert [c.status for c in rep.cases] == ["skipped", "pass", "pass"]
        assert rep.cases[0].witness["reason"]
        assert rep.cases[0].witness["lhs_q1"] == "26/27"
        assert rep.cases[0].witness["rhs_q1"] == "2"
        assert rep.summary == {"pass": 2, "fail": 0, "error": 0, "skipped": 1}

    def test_degenerate_diagnostics_flag(self):
        rep = run_suite(spec("thm-a", n_max=1, include_degenerate=True))
        wit = rep.cases[0].witness
        assert wit["diagnostics"]["lhs_q1_recomputed"] == "26/27"
        assert wit["diagnostics"]["rhs_q1_recomputed"] == "2"
        plain = run_suite(spec("thm-a", n_max=1))
        assert "diagnostics" not in plain.cases[0].witness

    def test_liu_range(self):
        rep = run_suite(spec("liu", p_max=11))
        assert [c.id for c in rep.cases] == ["liu:p=5", "liu:p=7", "liu:p=11"]
        assert all(c.status == "pass" for c in rep.cases)

    def test_class_filtered_prime_suites(self):
        rep = run_suite(spec("cor-a", p_max=13))
        assert [c.params["p"] for c in rep.cases] == [7, 13]
        rep = run_suite(spec("harmonic", p_max=17))
        assert [c.params["p"] for c in rep.cases] == [5, 11, 17]

    def test_relations_ids(self):
        rep = run_suite(spec("relations", m_max=1))
        assert [c.id for c in rep.cases] == [
            "relations:eq21:m=0", "relations:eq21:m=1",
            "relations:rel4phi3:m=0", "relations:rel4phi3:m=1",
            "relations:rel5phi4:m=0", "relations:rel5phi4:m=1",
        ]
        assert all(c.status == "pass" and c.certified for c in rep.cases)

    def test_empty_ranges_rejected(self):
        for bad in (spec("liu", p_max=4), spec("thm-b", n_max=4),
                    spec("thm-c", t=1, n_max=1), spec("all", p_max=4)):
            with pytest.raises(ConfigError):
                run_suite(bad)

    def test_malformed_specs_rejected(self):
        for bad in (spec("nope"), spec("thm-a", grid_margin=-1),
                    spec("thm-a", jobs=0), spec("thm-c", t=3),
                    spec("liu", t=1), spec("thm-a", n_min=13, n_max=7),
                    spec("lemma", m_max=-1)):
            with pytest.raises(ConfigError):
                run_suite(bad)

    def test_thm_c_t_filter(self):
        rep = run_suite(spec("thm-c", t=2, n_max=7))
        assert [c.id for c in rep.cases] == ["thm-c:t=2:n=4", "thm-c:t=2:n=7"]


class TestExecution:
    def test_parallel_matches_serial(self):
        serial = run_suite(spec("harmonic", p_max=29))
        parallel = run_suite(spec("harmonic", p_max=29, jobs=4))
        assert [(c.id, c.status, c.certified) for c in serial.cases] == \
            [(c.id, c.status, c.certified) for c in parallel.cases]

    def test_deterministic_modulo_timing(self):
        def strip(rep):
            obj = rep.to_obj()
            for c in obj["cases"]:
                c.pop("ms")
            return obj
        a = run_suite(spec("long", p_max=13))
        b = run_suite(spec("long", p_max=13))
        assert strip(a) == strip(b)

    def test_error_status_captured(self, monkeypatch):
        def boom(p, k=3):
            raise RuntimeError("boom")
        monkeypatch.setattr(padic, "check_liu", boom)
        rep = run_suite(spec("liu", p_max=7))
        assert all(c.status == "error" for c in rep.cases)
        assert "boom" in rep.cases[0].witness["error"]
        assert exit_code(rep) == 2

    def test_summary_counts_match(self):
        rep = run_suite(spec("thm-a", n_max=13))
        tally = {"pass": 0, "fail": 0, "error": 0, "skipped": 0}
        for c in rep.cases:
            tally[c.status] += 1
        assert rep.summary == tally

    def test_exit_code_precedence(self):
        def rep(**counts):
            return Report("v", {}, [], {"pass": 0, "fail": 0, "error": 0,
                                        "skipped": 0, **counts})
        assert exit_code(rep(error=1, fail=3)) == 2
        assert exit_code(rep(fail=1)) == 1
        assert exit_code(rep(skipped=2, **{"pass": 4})) == 0


class TestPropertyChecks:
    def test_ring_sweep(self):
        v = ring_property_sweep(trials=40, seed=1)
        assert v.status == "pass"
        assert ring_property_sweep().witness["trials"] >= 1000

    def test_cross_limit_both_classes(self):
        for p in (5, 7):
            v = cross_limit_check(p)
            assert v.status == "pass"
            assert v.witness["class"] == p % 6

    def test_cross_limit_detects_drift(self, monkeypatch):
        original = theorems.sides_at_one

        def crooked(which, n):
            lhs, rhs = original(which, n)
            return lhs + 1, rhs
        monkeypatch.setattr(theorems, "sides_at_one", crooked)
        assert cross_limit_check(5).status == "fail"


class TestEmission:
    def test_json_round_trip(self, tmp_path):
        rep = run_suite(spec("harmonic", p_max=11))
        path = tmp_path / "out.json"
        harness.emit_report(rep, str(path), "json")
        loaded = json.loads(path.read_text())
        assert loaded == rep.to_obj()
        assert loaded["summary"]["pass"] == 2
        # stable serialization of equal reports
        assert format_report(rep, "json") == format_report(rep, "json")

    def test_csv_columns(self):
        rep = run_suite(spec("harmonic", p_max=11))
        lines = format_report(rep, "csv").strip().splitlines()
        assert lines[0] == "id,status,certified,ms"
        assert len(lines) == 1 + len(rep.cases)
        first = lines[1].split(",")
        assert first[0] == "harmonic:p=5"
        assert first[1] == "pass"
        assert first[2] == "true"

    def test_text_summary_line(self):
        rep = run_suite(spec("thm-a", n_max=13))
        text = format_report(rep, "text")
        assert text.endswith("pass=2 fail=0 error=0 skipped=1\n")

    def test_unknown_format(self):
        rep = run_suite(spec("harmonic", p_max=11))
        with pytest.raises(ConfigError):
            format_report(rep, "yaml")


class TestCli:
    def test_config_error_exit(self, capsys):
        assert cli.cli_main(["verify", "liu", "--p-max", "4"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_report_written(self, tmp_path):
        out = tmp_path / "thm_b.json"
        code = cli.cli_main(["verify", "thm-b", "--n-max", "17",
                             "--report", str(out)])
        assert code == 0
        loaded = json.loads(out.read_text())  # json inferred from suffix
        assert [c["id"] for c in loaded["cases"]] == \
            ["thm-b:n=5", "thm-b:n=11", "thm-b:n=17"]

    def test_stdout_text(self, capsys):
        assert cli.cli_main(["verify", "harmonic", "--p-max", "11"]) == 0
        out = capsys.readouterr().out
        assert out.endswith("pass=2 fail=0 error=0 skipped=0\n")

    def test_bad_arguments(self, capsys):
        assert cli.cli_main(["verify", "no-such-suite"]) == 2
        assert cli.cli_main(["frobnicate"]) == 2
        capsys.readouterr()

    def test_unwritable_report(self, capsys):
        code = cli.cli_main(["verify", "harmonic", "--p-max", "11",
                             "--report", "/nonexistent/dir/x.json"])
        assert code == 2
        assert "cannot write" in capsys.readouterr().err


class TestFaultInjection:
    def test_perturbed_bracket_fails_thm_b(self, monkeypatch, tmp_path):
        real = theorems.bracket_base

        def crooked(n):
            rf = real(n)
            return type(rf).of(rf.num + rf.num.one(), rf.den)
        monkeypatch.setattr(theorems, "bracket_base", crooked)
        out = tmp_path / "fault.json"
        code = cli.cli_main(["verify", "thm-b", "--n-max", "11",
                             "--report", str(out)])
        assert code == 1
        loaded = json.loads(out.read_text())
        assert loaded["summary"]["fail"] == 2
        wit = loaded["cases"][0]["witness"]
        assert wit["num_valuation"] < wit["modulus_power"]

    def test_perturbed_gamma_sign_fails_invariants(self, monkeypatch):
        real = padic.morita_gamma

        def crooked(x, ctx):
            v = real(x, ctx)
            return padic.PadicResidue(-v.value, ctx)
        monkeypatch.setattr(padic, "morita_gamma", crooked)
        rep = run_suite(spec("invariants"))
        bad = {c.id: c.status for c in rep.cases if c.status != "pass"}
        assert bad, "sign flip must be noticed"
        assert all(k.startswith("invariants:gamma-factorial") for k in bad)
        assert exit_code(rep) == 1


class TestAllSuite:
    def test_reduced_all_run(self, tmp_path):
        out = tmp_path / "all.json"
        code = cli.cli_main(["verify", "all", "--n-max", "11", "--p-max",
                             "13", "--m-max", "1", "--jobs", "2",
                             "--report", str(out)])
        assert code == 0
        loaded = json.loads(out.read_text())
        ids = [c["id"] for c in loaded["cases"]]
        for probe in ("thm-a:n=1", "thm-a:n=7", "thm-b:n=5", "thm-c:t=1:n=2",
                      "lemma:m=0", "saalschutz:m=1", "relations:rel5phi4:m=1",
                      "wei-chain:dd:n=7", "wei-chain:ee:n=5", "limits:a:n=7",
                      "long:p=13", "liu:p=5", "cor-a:p=7", "cor-b:p=11",
                      "prop-a:p=13", "prop-b:p=5", "harmonic:p=11",
                      "invariants:ring-props:trials=1100",
                      "invariants:cross-limit:p=13"):
            assert probe in ids
        assert loaded["summary"]["fail"] == 0
        assert loaded["summary"]["error"] == 0
        assert loaded["summary"]["skipped"] == 1
