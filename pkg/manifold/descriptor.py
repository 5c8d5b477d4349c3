"""JSON atlas descriptors (tag, dims, chart ranges, constants)."""

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from manifold.atlas import ManifoldAtlas, circle, clifford_torus, cylinder, klein_bottle, torus3d

ManifoldTag = Literal["circle", "product-of-circles", "cylinder-axis", "torus3d", "klein4d"]


class AtlasDescriptor(BaseModel):
    """Declarative description of a latent manifold."""

    tag: ManifoldTag
    n_circles: Optional[int] = Field(default=None, ge=1)
    axis_range: tuple[float, float] = (-1.0, 1.0)
    R: float = Field(default=2.0, gt=0)
    r: float = Field(default=1.0, gt=0)
    a: float = Field(default=2.0, gt=0)
    b: float = Field(default=1.0, gt=0)
    resolution: Optional[int] = Field(default=None, ge=2)

    # Filled in from the tag; kept so the document states the dimensions.
    dim: Optional[int] = None
    embed_dim: Optional[int] = None

    @model_validator(mode="after")
    def _check_constants(self) -> "AtlasDescriptor":
        if self.tag == "torus3d" and not self.R > self.r:
            raise ValueError("torus3d needs R > r")
        if self.tag == "klein4d" and not self.a > self.b:
            raise ValueError("klein4d needs a > b")
        if self.tag == "cylinder-axis" and not self.axis_range[1] > self.axis_range[0]:
            raise ValueError("axis_range must be increasing")
        return self

    def build(self, default_resolution: int = 64) -> ManifoldAtlas:
        """Construct the atlas; chart-projected manifolds get a seed cloud."""
        if self.tag == "circle":
            atlas = circle()
        elif self.tag == "product-of-circles":
            atlas = clifford_torus(self.n_circles or 2)
        elif self.tag == "cylinder-axis":
            atlas = cylinder(self.axis_range, self.n_circles or 1)
        elif self.tag == "torus3d":
            atlas = torus3d(self.R, self.r)
        else:
            atlas = klein_bottle(self.a, self.b, resolution=self.resolution or default_resolution)
        if self.resolution and atlas.point_cloud is None:
            atlas = atlas.with_point_cloud(self.resolution)
        return atlas

    def resolved(self, default_resolution: int = 64) -> "AtlasDescriptor":
        atlas = self.build(default_resolution)
        return self.model_copy(update={"dim": atlas.dim, "embed_dim": atlas.embed_dim})

