from typing import Dict, Iterable, List

from sqlalchemy import create_engine, Column, String, Integer, Float, Boolean, inspect
from sqlalchemy.orm import sessionmaker, declarative_base
from sqlalchemy.exc import SQLAlchemyError

from densecode.core.schemas import VerdictRecord
from densecode.utils.dataclasses import TheoremId


Base = declarative_base()


class SweepVerdict(Base):
    __tablename__ = "sweep_verdicts"
    run_key = Column(String, primary_key=True)
    sample = Column(Integer, primary_key=True)
    theorem = Column(String, primary_key=True)
    lhs = Column(Float, nullable=False)
    rhs = Column(Float, nullable=False)
    slack = Column(Float, nullable=False)
    holds = Column(Boolean, nullable=False)
    applicable = Column(Boolean, nullable=False)

    @property
    def as_record(self) -> VerdictRecord:
        return VerdictRecord(
            theorem=TheoremId(self.theorem),
            sample=int(self.sample),
            lhs=float(self.lhs),
            rhs=float(self.rhs),
            slack=float(self.slack),
            holds=bool(self.holds),
            applicable=bool(self.applicable),
        )


class SweepDBConnector:
    """Checkpoint store for sweep verdicts, keyed by run key, sample index and theorem."""

    def __init__(self, db_url: str):
        self.engine = create_engine(db_url, pool_pre_ping=True)
        self.Session = sessionmaker(bind=self.engine)
        # Create tables if not exist
        if not inspect(self.engine).has_table(SweepVerdict.__tablename__):
            Base.metadata.create_all(self.engine)

    def upsert_verdicts(self, run_key: str, records: Iterable[VerdictRecord]):
        session = self.Session()
        try:
            for record in records:
                obj = session.get(SweepVerdict, (run_key, record.sample, record.theorem.value))
                if obj is None:
                    obj = SweepVerdict(run_key=run_key, sample=record.sample, theorem=record.theorem.value)
                    session.add(obj)
                obj.lhs = record.lhs
                obj.rhs = record.rhs
                obj.slack = record.slack
                obj.holds = record.holds
                obj.applicable = record.applicable
            session.commit()
        except SQLAlchemyError as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def get_completed_samples(self, run_key: str, theorems: Iterable[TheoremId]) -> Dict[int, List[VerdictRecord]]:
        """Samples with a stored verdict for every theorem in ``theorems``, records in theorem order."""
        order = [TheoremId(t).value for t in theorems]
        session = self.Session()
        try:
            rows = session.query(SweepVerdict).filter_by(run_key=run_key).all()
            by_sample: Dict[int, Dict[str, SweepVerdict]] = {}
            for row in rows:
                by_sample.setdefault(int(row.sample), {})[str(row.theorem)] = row
            return {
                sample: [found[t].as_record for t in order]
                for sample, found in by_sample.items()
                if all(t in found for t in order)
            }
        finally:
            session.close()

    def clear_run(self, run_key: str):
        session = self.Session()
        try:
            session.query(SweepVerdict).filter_by(run_key=run_key).delete()
            session.commit()
        except SQLAlchemyError as e:
            session.rollback()
            raise e
        finally:
            session.close()

    def close(self):
        self.engine.dispose()
