"""Print the recomputed Table I, the rho_1 decomposition summary and Table IV."""

from tangle_roof import tables


def main():
    print("F1, F2, F3 of the named four-qubit states")
    for key, got, want, dev in tables.table_one():
        print(f"  {key:5s} got {tuple(round(g, 12) for g in got)}  expected {want}  deviation {dev:.1e}")

    print("\nrho_1 decompositions: |average - closed form| and reconstruction residual")
    for cid, dev, res in tables.table_three():
        print(f"  {cid:8s} {dev:.1e}  {res:.1e}")

    print("\ntwo-qubit marginal concurrences vs closed forms (21 samples of p)")
    for j, pair, dev in tables.table_four():
        print(f"  rho_{j} {pair}  {dev:.1e}")


if __name__ == "__main__":
    main()
