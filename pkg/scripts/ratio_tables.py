"""Expected compressed/uncompressed cost ratio R: thresholds N with R > 1 and the large-N limit."""

import sys

from qloq.compress import grid_csv, ratio_grid, threshold_grid

ns = list(range(2, 10))
print("# smallest N with R > 1")
sys.stdout.write(grid_csv(threshold_grid(range(2, 8), ns), range(2, 8), ns))
print()
print("# R at N = 1e12")
sys.stdout.write(grid_csv(ratio_grid(range(1, 8), ns, 10 ** 12), range(1, 8), ns, lambda v: f"{v:.3f}"))
