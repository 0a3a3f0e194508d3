# experiments/models.py
from django.db import models

from .montecarlo import CSV_COLUMNS


class EstimateRecord(models.Model):
    """Una fila de estimación guardada con ``--save``."""

    label = models.CharField(max_length=100, blank=True, default='')
    dimension = models.PositiveSmallIntegerField()
    lam = models.FloatField()
    radius = models.PositiveIntegerField()
    n_reps = models.PositiveIntegerField()
    n_coexist = models.PositiveIntegerField(default=0)
    n_type1_dead = models.PositiveIntegerField(default=0)
    n_type2_dead = models.PositiveIntegerField(default=0)
    p_hat = models.FloatField()
    ci_lo = models.FloatField()
    ci_hi = models.FloatField()
    # 64 bits sin signo no caben en un BigIntegerField
    master_seed = models.CharField(max_length=20)
    config_digest = models.CharField(max_length=16, db_index=True)
    fertile = models.BooleanField(default=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['created_at', 'id']

    def __str__(self):
        etiqueta = self.label or self.config_digest
        return f"{etiqueta} λ={self.lam} R={self.radius}: {self.p_hat:.4f}"

    def as_row(self) -> dict:
        row = {
            'dimension': self.dimension,
            'lambda': self.lam,
            'R': self.radius,
            'n_reps': self.n_reps,
            'n_coexist': self.n_coexist,
            'n_type1_dead': self.n_type1_dead,
            'n_type2_dead': self.n_type2_dead,
            'p_hat': self.p_hat,
            'ci_lo': self.ci_lo,
            'ci_hi': self.ci_hi,
            'master_seed': int(self.master_seed),
            'config_digest': self.config_digest,
        }
        return {column: row[column] for column in CSV_COLUMNS}

    @classmethod
    def from_result(cls, result) -> 'EstimateRecord':
        row = result.as_row()
        return cls(
            label=result.label,
            dimension=row['dimension'],
            lam=row['lambda'],
            radius=row['R'],
            n_reps=row['n_reps'],
            n_coexist=row['n_coexist'],
            n_type1_dead=row['n_type1_dead'],
            n_type2_dead=row['n_type2_dead'],
            p_hat=row['p_hat'],
            ci_lo=row['ci_lo'],
            ci_hi=row['ci_hi'],
            master_seed=str(row['master_seed']),
            config_digest=row['config_digest'],
            fertile=result.fertile,
        )
