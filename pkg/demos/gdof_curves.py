"""Write degrees-of-freedom curves as CSV files ready for any plotting tool.

Also reports where listening helps the sum channel most at β = 16/5.

    python demos/gdof_curves.py [out_dir]
"""

import sys
from fractions import Fraction
from pathlib import Path

from hdcoop.analysis import emit_figure_data, rows_to_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
for kind in ("sum_gdof", "cog_gdof"):
    header, rows = emit_figure_data(kind)
    path = out / f"{kind}.csv"
    path.write_text(rows_to_csv(header, rows))
    print(f"{path}: {len(rows)} rows")

_, rows = emit_figure_data("sum_gdof")
curve = {}
for a, b, d in rows:
    curve.setdefault(b, {})[a] = d
plain, helped = curve[Fraction(0)], curve[Fraction(16, 5)]
gain, alpha = max((helped[a] - plain[a], a) for a in plain)
print(f"largest gain from listening at β=16/5: {gain} at α={alpha} ({plain[alpha]} → {helped[alpha]})")
