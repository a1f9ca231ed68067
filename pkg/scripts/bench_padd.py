#!/usr/bin/env python3
"""Adder micro-benchmarks: pipelined mixed adds and a dependent chain.

Wall-clock numbers are reported, never asserted; the checked quantity is
the dependent chain's final value against the reference fold.
"""

import sys

from vecmsm.cli import main as cli_main


def main():
    for mode, count in (("padd-throughput", 1 << 14), ("padd-latency", 1 << 12)):
        print(f"== bench {mode}")
        rc = cli_main(["bench", mode, "--count", str(count), "--check"])
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
