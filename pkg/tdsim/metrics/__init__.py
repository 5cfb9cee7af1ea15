"""Resource accounting."""

from .query_ledger import QueryLedger, combine_costs

__all__ = ["QueryLedger", "combine_costs"]
