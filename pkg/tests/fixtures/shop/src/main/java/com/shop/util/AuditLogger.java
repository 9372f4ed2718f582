package com.shop.util;

import com.shop.model.Customer;

public final class AuditLogger {

    public static final AuditLogger INSTANCE = new AuditLogger();

    public void log(String message) {
        class Entry {
            Customer who;
            String text;
        }
        Entry e = new Entry();
        e.text = message;
        System.out.println(Entry.class.getSimpleName() + ": " + e.text);
    }
}
