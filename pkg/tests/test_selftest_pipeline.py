import pytest

from src.selftest_pipeline import (
    MAX_VIOLATIONS, SelftestPipeline, SelftestPipelineError, SuiteResult, SuiteStage, SuiteStatus,
    run_selftest,
)


def test_unknown_suite():
    with pytest.raises(SelftestPipelineError):
        SelftestPipeline(suites=["sl2_cone", "bogus"])


def test_suites_keep_canonical_order():
    pipeline = SelftestPipeline(suites=["golden_files", "sl2_cone"])
    assert pipeline.suites == ["sl2_cone", "golden_files"]


def test_result_truncates_violations():
    result = SuiteResult(name="x", stage=SuiteStage.COMPLETED, status=SuiteStatus.FAIL,
                         violations=list(range(MAX_VIOLATIONS + 5)))
    data = result.to_dict()
    assert len(data["violations"]) == MAX_VIOLATIONS
    assert data["violation_count"] == MAX_VIOLATIONS + 5
    assert "start_time" not in data


def test_overall_status():
    pipeline = SelftestPipeline()
    results = [SuiteResult("a", status=SuiteStatus.PASS),
               SuiteResult("b", status=SuiteStatus.INCONCLUSIVE)]
    report = pipeline.generate_report(results)
    assert report["overall"] == "INCONCLUSIVE"
    assert report["summary"] == {"total": 2, "pass": 1, "fail": 0, "inconclusive": 1}
    results.append(SuiteResult("c", status=SuiteStatus.FAIL))
    assert pipeline.generate_report(results)["overall"] == "FAIL"


@pytest.mark.asyncio
async def test_fast_suites_pass():
    report = await run_selftest(suites=["sl2_cone", "witness_triples", "golden_files"])
    assert report["overall"] == "PASS", report
    assert [s["name"] for s in report["suites"]] == ["sl2_cone", "witness_triples", "golden_files"]


@pytest.mark.asyncio
async def test_suite_exception_becomes_fail(tmp_path):
    pipeline = SelftestPipeline(gcm_dir=tmp_path, suites=["sl2_cone"])
    results = await pipeline.run()
    assert results[0].status is SuiteStatus.FAIL
    assert results[0].stage is SuiteStage.FAILED
    assert "GCMFileError" in results[0].message


@pytest.mark.asyncio
async def test_golden_mismatch_reports_diff(tmp_path):
    (tmp_path / "a1_inequalities.json").write_text("{}\n", encoding="utf-8")
    pipeline = SelftestPipeline(golden_dir=tmp_path, suites=["golden_files"])
    results = await pipeline.run()
    assert results[0].status is SuiteStatus.FAIL
    files = [v["file"] for v in results[0].violations]
    assert files == ["a1_inequalities.json", "a2_inequalities.json", "a1_face.json"]


@pytest.mark.slow
@pytest.mark.asyncio
async def test_structural_suites():
    report = await run_selftest(suites=["freg_sweep", "length_identity", "gkm_soundness",
                                        "affine_necessity"])
    assert report["overall"] == "PASS", report


@pytest.mark.slow
@pytest.mark.asyncio
async def test_full_selftest_has_no_failures():
    report = await run_selftest(seed=7)
    assert report["summary"]["fail"] == 0, report
