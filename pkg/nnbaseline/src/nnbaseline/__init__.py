"""CNN regression baseline for Betti-number prediction.

Consumes the benchmark's manifest (line-delimited records) and image
files directly, and emits evaluation reports in the shared CSV schema
`dataset,method,dim,noise_level,mae,std,n`.
"""

__version__ = "0.1.0"
