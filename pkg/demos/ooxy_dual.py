"""ooXY: Fun(X) → Fun(Y) along f*, with trivial action.

The ground states live naturally on the dual complex: Y labels on dual edges,
X labels on dual vertices.  The example compares f = id on ℤ2 (a single ground
state on every surface) with the two degenerate cases X = 1 (toric code on the
dual lattice) and Y = 1 (Potts model).
"""

from hopfkit import ModelInstance, cyclic, ground_dim, ooxy
from hopfkit.fingroup import identity_hom, trivial_group, trivial_hom
from hopfkit.oracle import ooxy_ground_count
from hopfkit.surface import sphere_theta, torus_grid


def main() -> None:
    Z1, Z2, Z3 = trivial_group(), cyclic(2), cyclic(3)
    cases = {"f = id on Z2": identity_hom(Z2), "X = 1, Y = Z2": trivial_hom(Z2, Z1),
             "Y = 1, X = Z3": trivial_hom(Z1, Z3)}
    for label, f in cases.items():
        xm = ooxy(f.source, f.target, f)
        for c in (sphere_theta(), torus_grid(2, 2)):
            print(f"{label:14s} {c.name:18s} ground {ground_dim(ModelInstance(xm, c))}  "
                  f"dual-colouring orbits {ooxy_ground_count(c, f)}")


if __name__ == "__main__":
    main()
