"""GoXo: ℤ2 acting on ℤ3 by inversion.

On a sphere the ground states are the orbits of the action ({0} and {1, 2});
on a torus they are commuting holonomy pairs together with compatible plaquette
labels, up to simultaneous gauge.  Both counts come out of the lattice model
and agree with direct enumeration of fully flat colourings.
"""

from hopfkit import ModelInstance, cyclic, ground_dim, goxo
from hopfkit.fingroup import inversion_action
from hopfkit.oracle import goxo_flat_colourings, goxo_ground_count
from hopfkit.surface import sphere_tetrahedron, sphere_theta, torus_grid


def main() -> None:
    G, X = cyclic(2), cyclic(3)
    act = inversion_action(G, X)
    xm = goxo(G, X, act)
    for c in (sphere_theta(), sphere_tetrahedron(), torus_grid(2, 2)):
        flat = goxo_flat_colourings(c, G, X, act)
        print(f"{c.name:22s} flat colourings {len(flat):3d}  "
              f"orbits {goxo_ground_count(c, G, X, act)}  ground {ground_dim(ModelInstance(xm, c))}")


if __name__ == "__main__":
    main()
