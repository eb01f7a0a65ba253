"""Half-wave fencing: predicted versus simulated frequency scaling.

The completed fence iteration d splits the cavity into 4^d cells and ideally
multiplies the dominant frequency by 2^d.  Finite-diameter wires leak field
between cells, so the simulated scaling lags the ideal one; the wire-count
law (2 + sqrt(1 + 3 N)) / 3 stays a sound upper envelope.
"""
from boxmodes.fencing import (
    FencePlan,
    fence_scaled_frequency,
    frequency_from_wire_count,
    generate_fence_layout,
    write_layout_csv,
)
from boxmodes.helmholtz import Grid, dominant_eigenmode, rasterize_wires

SIDE = 0.072
WIRE = 500e-6
RESOLUTION = 257


def main() -> None:
    grid = Grid(side=SIDE, resolution=RESOLUTION)
    f_empty = dominant_eigenmode(grid).frequency
    print(f"empty cavity: {f_empty / 1e9:.4f} GHz")
    print(f"{'d':>2} {'wires':>6} {'ideal':>6} {'envelope':>9} {'simulated':>10}")

    for d in (0, 1, 2):
        plan = FencePlan(d=d, side=SIDE, wire_diameter=WIRE)
        layout = generate_fence_layout(plan)
        mask = rasterize_wires(grid, layout) if layout.count else None
        sol = dominant_eigenmode(grid, mask=mask)
        simulated = sol.frequency / f_empty
        print(
            f"{d:2d} {layout.count:6d} {fence_scaled_frequency(d):6.1f} "
            f"{frequency_from_wire_count(layout.count):9.3f} {simulated:10.4f}"
        )
        if d == 2:
            write_layout_csv(layout, "fence_d2_layout.csv")

    print("wrote fence_d2_layout.csv")


if __name__ == "__main__":
    main()
