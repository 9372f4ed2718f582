package com.shop.model;

public record Money(long amount, Currency currency) implements Comparable<Money> {

    public enum Currency { EUR, USD }

    public Money {
        if (amount < 0) {
            throw new IllegalArgumentException("negative");
        }
    }

    @Override
    public int compareTo(Money other) {
        return Long.compare(amount, other.amount);
    }
}
