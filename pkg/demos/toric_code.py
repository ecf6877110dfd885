"""The toric code as the crossed module ℂ → ℂℤ2.

Builds the model on a sphere and on two tori, counts ground states by the
trace of the projector product, and compares with the count of flat ℤ2
connections up to gauge.
"""

from hopfkit import ModelInstance, commutation_report, cyclic, ground_dim, kitaev
from hopfkit.fingroup import trivial_action, trivial_group
from hopfkit.oracle import goxo_ground_count
from hopfkit.surface import sphere_tetrahedron, sphere_theta, torus_grid


def main() -> None:
    Z2 = cyclic(2)
    xm = kitaev(Z2)
    for c in (sphere_theta(), sphere_tetrahedron(), torus_grid(2, 2), torus_grid(2, 3)):
        m = ModelInstance(xm, c)
        gd = ground_dim(m)
        oracle = goxo_ground_count(c, Z2, trivial_group(), trivial_action(Z2, trivial_group()))
        print(f"{c.name:22s} genus {c.genus}  states {m.total_dim:>6d}  ground {gd}  oracle {oracle}")
    rep = commutation_report(ModelInstance(xm, torus_grid(2, 2)), sections=("projectors",))
    print("projector algebra on the torus:", "ok" if rep.ok else rep)


if __name__ == "__main__":
    main()
