"""
Reproducible runs from the command line
=======================================

Every subcommand can write its output atomically together with a manifest
holding the parameters, seed, version and a checksum.  ``replay`` reruns a
manifest and confirms the checksum.
"""

# %%
import json
import subprocess
import sys
import tempfile
from pathlib import Path

out = Path(tempfile.mkdtemp()) / "estimate.json"
cmd = [sys.executable, "-m", "zxzcert", "estimate", "--p", "0.02", "--eta", "0.6", "--windows", "20000", "--seed", "3", "--out", str(out)]
subprocess.run(cmd, check=True)
print(json.dumps(json.loads(out.read_text())["estimate"], indent=2))

# %%
manifest = Path(str(out) + ".manifest.json")
print(manifest.read_text())
proc = subprocess.run([sys.executable, "-m", "zxzcert", "replay", str(manifest)], capture_output=True, text=True)
print(proc.stderr.strip(), "(exit code", proc.returncode, ")")
