"""Closed-form mode table of a 72 x 3 x 72 mm box and the coupling a
transmon-scale dipole would see at the dominant-mode antinode."""
from boxmodes.physics import (
    CavityGeometry,
    CavityModeIndex,
    coupling_from_field,
    dressed_frequencies,
    mode_frequency,
    zero_point_field,
)

GEOM = CavityGeometry(length_a=0.072, height_b=0.003, depth_e=0.072)
DIPOLE = 1e-27  # C*m, a large-pad transmon


def main() -> None:
    table = []
    for n in range(4):
        for m in range(4):
            for l in range(4):
                if sum(1 for i in (n, m, l) if i > 0) < 2:
                    continue
                f = mode_frequency(GEOM, CavityModeIndex(n, m, l))
                table.append((f, n, m, l))
    table.sort()

    print("lowest box modes")
    for f, n, m, l in table[:8]:
        print(f"  ({n},{m},{l})  {f / 1e9:8.4f} GHz")

    f_c = table[0][0]
    e0 = zero_point_field(GEOM, f_c)
    g = coupling_from_field(e0, DIPOLE)
    print(f"\ndominant mode: {f_c / 1e9:.4f} GHz")
    print(f"zero-point field at the antinode: {e0 * 1e6:.2f} uV/m")
    print(f"coupling for a {DIPOLE:.0e} C*m dipole: g = {g:.1f} Hz")

    lower, upper = dressed_frequencies(f_c, g=4e6, delta=f_c - 6e9)
    print("\ndressed pair for g = 4 MHz against a 6 GHz qubit:")
    print(f"  lower {lower / 1e9:.6f} GHz, upper {upper / 1e9:.6f} GHz")


if __name__ == "__main__":
    main()
