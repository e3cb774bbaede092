"""Complexity features and the shipped per-function results table.

Computes source features for the bundled benchmark and reproduces the
feature-vs-IO-accuracy correlation table from the shipped 64-function
evaluation of a fully trained model.
"""

from neurocc.analysis import (
    FunctionMetrics, FunctionReport, correlation_table, function_metrics,
)
from neurocc.benchmark import bundled_benchmark, fine_grained_fixture
from neurocc.corpus import strip_c_boilerplate


def main():
    print("benchmark features (LOC / tokens / cyclo / params / pointers):")
    for entry in bundled_benchmark()[:6]:
        m = function_metrics(strip_c_boilerplate(entry.unit))
        print(f"  {entry.unit.id:12s} {m.loc:3d} {m.tokens:4d} {m.cyclo:3d} "
              f"{m.params:3d} {m.pointers:3d}")

    reports = [
        FunctionReport(
            id=row["Function"],
            io_passed=9 if row["IO"] else 0,
            io_total=9,
            syntax_ok=bool(row["Syntax"]),
            bleu=row["BLEU"],
            metrics=FunctionMetrics(
                loc=row["LOC"], tokens=row["TOKENS"], cyclo=row["CYCLO"],
                params=row["PARAMS"], pointers=row["POINTERS"],
            ),
        )
        for row in fine_grained_fixture()
    ]
    print(f"\ncorrelations with IO success over {len(reports)} functions:")
    for name, c in correlation_table(reports):
        flag = "*" if c.significant else " "
        print(f"  {name:9s} r = {c.r:+.3f}  (p = {c.p_value:.3g}) {flag}")


if __name__ == "__main__":
    main()
