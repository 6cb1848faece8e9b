class Config:
    # Expansion and search budgets
    EXPANSION_CAP = 2 ** 20  # letters produced by eval of one expression
    REACHABLE_BUDGET = 10 ** 6  # elements of the reachable submonoid
    SUBSET_STATE_CAP = 2 ** 16  # states of a subset construction
    FACTORIAL_N_CAP = 8  # largest n for c(M) = max(3, n!)

    # Admissibility polynomial C * (n + d + log2(|Gamma| + |Omega|))^4
    ADMISSIBILITY_C = 64

    # Solver defaults
    MAX_VAR_LENGTH = 6
    MAX_SEARCH_DEPTH = 40
    BRANCH_BUDGET = 200_000
    DEDUP_VISITED = True
    MOVE_ORDER = ('partial', 'base_change', 'projection')
    PROJECTION_MIN_WITNESS = 2  # shorter witnesses are guessed letter by letter

    # Exponent of periodicity ceiling 2^(c * (d + n * ceil(log2(n + 1))))
    EXP_CEILING_C = 1
    EXP_CEILING_CAP = 2 ** 16

    # Certificate construction
    LEVEL_SCHEDULE = 'doubling'
    MAX_PERIOD = 64  # longest block period tried by the compressor

    # Printable prefixes for letters allocated on the fly
    FRESH_PREFIXES = {
        'variable': 'V',
        'separator': 'sep',
        'free': 'f',
        'block': 'B',
        'projection': 'z'
    }
