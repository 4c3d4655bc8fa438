#!/usr/bin/env python3
"""Run every verification suite and write a JSON report.

Usage: python scripts/run_verify_all.py [out.json]
"""

import sys

from seltrace.config import RunConfig
from seltrace.suites import emit_report, run_all


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "verify_all_report.json"
    code, reports, lines = run_all(RunConfig())
    for line in lines:
        print(line)
    emit_report(reports, out)
    print(f"wrote {out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
