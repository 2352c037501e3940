#!/usr/bin/env python3
"""Regenerate the shipped fixture corpus under src/catecom/fixtures/.

The corpus is the single source of canonical example documents: one
plane-wave/ultrasoft-pseudopotential method, unit models for PBE and
HSE06 Kohn-Sham DFT, CCSD, OLS, GW and BSE, and two compound models
(the DFT+GW+BSE chain and a random-forest ensemble of decision trees).
"""

from __future__ import annotations

import sys
from pathlib import Path

from catecom.builder import build_unit_model, compose_compound_model
from catecom.documents import serialize_document
from catecom.entities import Method, MethodParameter

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "catecom" / "fixtures"


def pw_us_method() -> Method:
    return Method(
        type="pseudopotential",
        subtype="us",
        parameters=(
            MethodParameter("ecutrho", 200, categories=("precision",), unit="Ry"),
            MethodParameter("ecutwfc", 50, categories=("precision",), unit="Ry"),
            MethodParameter("occupations", "smearing"),
        ),
        precision=("ecutrho", "ecutwfc"),
        data={
            "pseudo": "us-gga-pbe-v1",
            "searchText": "plane-wave ultrasoft pseudopotential",
        },
    )


def ensemble_method() -> Method:
    return Method(
        type="ensemble",
        subtype="bagging",
        parameters=(
            MethodParameter("n_estimators", 3, categories=("precision",)),
        ),
        precision=("n_estimators",),
        data={"searchText": "random forest decision tree ensemble"},
    )


def build_corpus() -> dict[str, object]:
    method = pw_us_method()
    ksdft_pbe = build_unit_model(
        "pb/qm/dft/ksdft",
        "PBE KS-DFT",
        "ksdft-pbe",
        "fid-1",
        functional="pbe",
        tags=["self-consistent", "scaling-power:3"],
        method=method,
    )
    ksdft_hse06 = build_unit_model(
        "pb/qm/dft/ksdft",
        "HSE06 KS-DFT",
        "ksdft-hse06",
        "fid-4",
        functional="hse06",
        tags=["self-consistent"],
        method=method,
    )
    ccsd = build_unit_model(
        "pb/qm/abin",
        "CCSD",
        "ccsd",
        "fid-2",
        tags=["single-reference", "coupled-cluster"],
    )
    ols = build_unit_model("st/det/lin", "OLS", "ols", "fid-3")
    gw = build_unit_model(
        "pb/qm/abin", "GW", "gw", "fid-5", tags=["perturbative"]
    )
    bse = build_unit_model(
        "pb/qm/abin",
        "BSE",
        "bse",
        "fid-6",
        tags=["perturbative", "excited-states"],
    )
    dft_gw_bse = compose_compound_model(
        [ksdft_pbe, gw, bse],
        {"fid-1": "wu-pw", "fid-5": "wu-mbpt", "fid-6": "wu-mbpt"},
        method,
    )
    trees = [
        build_unit_model(
            "st/det/dtr",
            f"Decision tree {i}",
            f"decision-tree-{i}",
            f"rf-tree-{i}",
        )
        for i in (1, 2, 3)
    ]
    random_forest = compose_compound_model(
        trees,
        {t.flowchart_id: "wu-ensemble" for t in trees},
        ensemble_method(),
    )
    return {
        "method_pw-us.json": method,
        "um_ksdft-pbe.json": ksdft_pbe,
        "um_ksdft-hse06.json": ksdft_hse06,
        "um_ccsd.json": ccsd,
        "um_ols.json": ols,
        "um_gw.json": gw,
        "um_bse.json": bse,
        "cm_dft-gw-bse.json": dft_gw_bse,
        "cm_random-forest.json": random_forest,
    }


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, entity in build_corpus().items():
        path = FIXTURES / name
        path.write_bytes(serialize_document(entity))
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
