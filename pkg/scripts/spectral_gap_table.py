#!/usr/bin/env python3
"""Print the spectral gap 1 - lambda_2 of the expected gossip matrix for the
standard topologies at several sizes, including virtual-node expansions."""

import argparse

import numpy as np

from pairgossip.graphs import (complete_graph, cycle_graph, spectral_gap,
                               tensor_with_complete, watts_strogatz_graph)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[699, 999])
    ap.add_argument("--ws-k", type=int, default=5)
    ap.add_argument("--ws-p", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tensor-k", type=int, default=None,
                    help="also report the gap after tensoring non-complete "
                         "graphs with the complete graph on k virtual nodes")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'topology':<14} {'n':>6} {'gap':>12}"
          + (f" {'gap/tensor':>12}" if args.tensor_k else ""))
    for n in args.sizes:
        rows = [("complete", complete_graph(n))]
        if n % 2 == 1:
            rows.append(("cycle", cycle_graph(n)))
        rows.append(("small-world", watts_strogatz_graph(n, args.ws_k,
                                                         args.ws_p, rng)))
        for name, g in rows:
            line = f"{name:<14} {n:>6} {spectral_gap(g):>12.5e}"
            if args.tensor_k and not g.is_complete():
                t = tensor_with_complete(g, args.tensor_k)
                line += f" {spectral_gap(t):>12.5e}"
            print(line)


if __name__ == "__main__":
    main()
