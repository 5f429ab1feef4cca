"""Exception types shared across the toolkit."""


class Sparse2StageError(Exception):
    """Base class for all toolkit errors."""


class ZeroColumn(Sparse2StageError):
    def __init__(self, j):
        self.column = j
        super().__init__(f"column {j} is identically zero and cannot be normalized")


class RankDeficient(Sparse2StageError):
    def __init__(self, subset):
        self.subset = tuple(subset)
        super().__init__(f"Gram block for subset {self.subset} is numerically singular")


class NotConverged(Sparse2StageError):
    """Coordinate descent hit the cycle budget before reaching tolerance.

    The partially converged result is attached as ``result``.
    """

    def __init__(self, result):
        self.result = result
        super().__init__(
            f"KKT violation {result.kkt.max_violation:.3e} after {result.iterations} cycles"
        )


class CombinatorialBudgetExceeded(Sparse2StageError):
    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"exact enumeration needs {count} subsets, budget is {budget}")


class MissingEigenValue(Sparse2StageError):
    pass


class EmptyOracleSet(Sparse2StageError):
    pass


class ZeroCoefficient(Sparse2StageError):
    pass


class BudgetExceeded(Sparse2StageError):
    pass


class SingularBlock(Sparse2StageError):
    pass


class InvalidUnitVector(Sparse2StageError):
    pass


class InvalidFamilyParam(Sparse2StageError):
    pass
