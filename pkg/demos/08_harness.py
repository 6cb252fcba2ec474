"""
Running the verification harness from Python
============================================

The same entry points back the ``charvar`` command.
"""
import tempfile
from dataclasses import replace

from charvar.harness import default_matrix, run_verify

out = tempfile.mkdtemp()
cfg = replace(default_matrix()["g2n2"], samples=300, symplectic_samples=10, output=out)
for suite in ("twist", "lemma", "orthogonality", "mcg", "symplectic"):
    rep = run_verify(cfg, suite)
    status = {t.status for t in rep.tests}
    print(f"{suite:<14} {len(rep.tests):>3} tests  statuses={sorted(status)}")
print("reports under", out)
