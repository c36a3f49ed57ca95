"""Linear constraints on partial augmentations of torsion units in integral group rings."""
