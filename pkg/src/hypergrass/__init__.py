"""Exact arithmetic for hyperfields and matroids over hyperfields.

Subpackages cover the ten registered hyperfields and their set-valued
addition (``fields``), the homomorphism diagram and representing-object
verifiers (``homs``), Grassmann-Plucker vectors (``plucker``), finite
Grassmannian enumeration and weak-map posets (``grassmannian``), order
complexes with mod-2 homology (``topology``), realization-space fibers
and the Dressian (``realization``), and Viro dequantization (``dequant``).
"""

from hypergrass.fields import HF, Element, SetValue

__all__ = ["HF", "Element", "SetValue"]
__version__ = "0.1.0"
