# logpart — certified numerics for finite differences of log p(n)
