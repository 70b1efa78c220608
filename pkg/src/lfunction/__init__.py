"""Two- and three-term relations of a Saalschutzian 4F3(1) combination L(a,b,c,d;e;f,g)."""
__version__ = "0.1.0"
